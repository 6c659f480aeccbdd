#include "tailgate/exact.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "tailgate/numerics.hpp"

namespace tailgate::exact {

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::IndependentFamily: return "INDEPENDENT_FAMILY";
        case Provenance::IidPower: return "IID_POWER";
        case Provenance::Raw: return "RAW";
    }
    return "?";
}

FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b, std::size_t cap) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "convolution of laws of different dimension");
    if (a.size() > cap / b.size())
        throw Error(ErrorCode::SupportOverflow, std::to_string(a.size()) + " x " + std::to_string(b.size()) +
                                                    " atoms exceeds the support cap " + std::to_string(cap));
    std::vector<Atom> atoms;
    atoms.reserve(a.size() * b.size());
    for (const auto& x : a.atoms())
        for (const auto& y : b.atoms()) atoms.push_back({x.point + y.point, x.prob * y.prob});
    return FiniteDistribution(std::move(atoms));
}

SumLaw sum_family(const ComponentFamily& fam, std::size_t cap) {
    FiniteDistribution acc = fam.finite(0);
    for (std::size_t k = 1; k < fam.size(); ++k) acc = convolve(acc, fam.finite(k), cap);
    return {std::move(acc), Provenance::IndependentFamily, fam.size()};
}

SumLaw iid_sum(const FiniteDistribution& d, std::size_t n, std::size_t cap) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "iid_sum needs n >= 1");
    std::optional<FiniteDistribution> result;
    FiniteDistribution base = d;
    for (std::size_t m = n;;) {
        if (m & 1U) result = result ? convolve(*result, base, cap) : base;
        m >>= 1U;
        if (m == 0) break;
        base = convolve(base, base, cap);
    }
    return {std::move(*result), Provenance::IidPower, n};
}

SumLaw iid_sum_linear(const FiniteDistribution& d, std::size_t n, std::size_t cap) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "iid_sum needs n >= 1");
    FiniteDistribution acc = d;
    for (std::size_t k = 1; k < n; ++k) acc = convolve(acc, d, cap);
    return {std::move(acc), Provenance::IidPower, n};
}

double tail(const FiniteDistribution& s, double lambda, NormKind k) {
    ExactSum p;
    for (const auto& a : s.atoms())
        if (norm(a.point, k) >= lambda) p.add(a.prob);
    return p.value();
}

double norm_moment(const FiniteDistribution& s, NormKind k, double p) {
    if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment order must be positive");
    ExactSum acc;
    for (const auto& a : s.atoms()) {
        const double r = norm(a.point, k);
        acc.add(a.prob * (p == 2.0 ? r * r : p == 1.0 ? r : std::pow(r, p)));
    }
    return acc.value();
}

double lp_norm(const FiniteDistribution& s, NormKind k, double p) {
    const double m = norm_moment(s, k, p);
    return p == 2.0 ? std::sqrt(m) : p == 1.0 ? m : std::pow(m, 1.0 / p);
}

FiniteDistribution norm_law(const FiniteDistribution& s, NormKind k) {
    std::vector<Atom> atoms;
    atoms.reserve(s.size());
    for (const auto& a : s.atoms()) atoms.push_back({Vector{norm(a.point, k)}, a.prob});
    return FiniteDistribution(std::move(atoms));
}

MedianResult median_norm(const FiniteDistribution& s, NormKind k) {
    const auto law = norm_law(s, k);
    ExactSum cum;
    for (const auto& a : law.atoms()) {
        cum.add(a.prob);
        if (cum.value() >= 0.5 - 1e-12) return {a.point[0]};
    }
    return {law.atoms().back().point[0]};
}

std::vector<double> support_norms(const FiniteDistribution& s, NormKind k) {
    std::vector<double> out;
    out.reserve(s.size());
    for (const auto& a : s.atoms()) out.push_back(norm(a.point, k));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace tailgate::exact
