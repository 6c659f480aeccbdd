#include "tailgate/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tailgate/exact.hpp"
#include "tailgate/numerics.hpp"

namespace tailgate {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kMassTolerance = 1e-9;

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<Atom> atoms) {
    if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "distribution has no atoms");
    dim_ = atoms.front().point.dim();
    if (dim_ == 0) throw Error(ErrorCode::InvalidVector, "atoms must have positive dimension");
    for (const auto& a : atoms) {
        require_same_dim(a.point, atoms.front().point);
        if (!std::isfinite(a.prob) || a.prob < 0.0)
            throw Error(ErrorCode::InvalidArgument, "atom probability must be finite and >= 0");
    }
    // Sorting by (point, prob) fixes the order in which duplicate points are
    // summed, so the merged law depends only on the multiset of input atoms.
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
        if (x.point == y.point) return x.prob < y.prob;
        return x.point < y.point;
    });
    atoms_.reserve(atoms.size());
    for (std::size_t i = 0; i < atoms.size();) {
        std::size_t j = i;
        double p = 0.0;
        while (j < atoms.size() && atoms[j].point == atoms[i].point) p += atoms[j++].prob;
        if (p > 0.0) atoms_.push_back({atoms[i].point, p});
        i = j;
    }
    if (atoms_.empty()) throw Error(ErrorCode::InvalidArgument, "distribution has zero mass");
    const double mass = total_mass();
    if (std::abs(mass - 1.0) > kMassTolerance)
        throw Error(ErrorCode::InvalidArgument, "total probability " + std::to_string(mass) + " != 1");
}

FiniteDistribution FiniteDistribution::point_mass(const Vector& x) { return FiniteDistribution({{x, 1.0}}); }

FiniteDistribution FiniteDistribution::rademacher(std::size_t dim) {
    Vector up(dim);
    up.set(0, 1.0);
    return FiniteDistribution({{up, 0.5}, {-up, 0.5}});
}

double FiniteDistribution::total_mass() const noexcept {
    ExactSum s;
    for (const auto& a : atoms_) s.add(a.prob);
    return s.value();
}

double FiniteDistribution::prob_of(const Vector& x) const {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                     [](const Atom& a, const Vector& v) { return a.point < v; });
    return (it != atoms_.end() && it->point == x) ? it->prob : 0.0;
}

ContinuousSpec::ContinuousSpec(Variant v) : v_(std::move(v)) {
    const double a = lower(), b = upper();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw Error(ErrorCode::InvalidArgument, "continuous spec requires finite a < b");
}

double ContinuousSpec::lower() const noexcept {
    return std::visit([](const auto& s) { return s.a; }, v_);
}

double ContinuousSpec::upper() const noexcept {
    return std::visit([](const auto& s) { return s.b; }, v_);
}

namespace {

std::size_t component_dim(const Component& c) {
    return std::visit([](const auto& x) { return x.dim(); }, c);
}

}  // namespace

ComponentFamily::ComponentFamily(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "family needs n >= 1 components");
    dim_ = component_dim(components_.front());
    for (const auto& c : components_)
        if (component_dim(c) != dim_)
            throw Error(ErrorCode::DimMismatch, "components of a family must share a dimension");
}

ComponentFamily::ComponentFamily(std::vector<FiniteDistribution> components)
    : ComponentFamily(std::vector<Component>(std::make_move_iterator(components.begin()),
                                             std::make_move_iterator(components.end()))) {}

bool ComponentFamily::all_finite() const noexcept {
    return std::all_of(components_.begin(), components_.end(),
                       [](const Component& c) { return std::holds_alternative<FiniteDistribution>(c); });
}

const FiniteDistribution& ComponentFamily::finite(std::size_t k) const {
    const auto* d = std::get_if<FiniteDistribution>(&components_.at(k));
    if (d == nullptr)
        throw Error(ErrorCode::InvalidArgument,
                    "component " + std::to_string(k + 1) + " is continuous; exact computation needs finite support");
    return *d;
}

std::vector<FiniteDistribution> ComponentFamily::finite_components() const {
    std::vector<FiniteDistribution> out;
    out.reserve(size());
    for (std::size_t k = 0; k < size(); ++k) out.push_back(finite(k));
    return out;
}

double evaluate(const TestFunction& g, const Vector& x) {
    const double y = std::visit(
        Overloaded{
            [&](const PolynomialTest& p) {
                double acc = 0.0;
                for (const auto& m : p.terms) {
                    if (m.exponents.size() != x.dim())
                        throw Error(ErrorCode::EvalFailure, "monomial dimension does not match point");
                    double term = m.coeff;
                    for (std::size_t i = 0; i < x.dim(); ++i)
                        for (unsigned e = 0; e < m.exponents[i]; ++e) term *= x[i];
                    acc += term;
                }
                return acc;
            },
            [&](const NormIndicator& ind) {
                const double r = norm(x, ind.norm);
                return (ind.sense == Sense::AtLeast ? r >= ind.threshold : r <= ind.threshold) ? 1.0 : 0.0;
            },
            [&](const HalfSpaceIndicator& h) {
                if (h.direction.dim() != x.dim())
                    throw Error(ErrorCode::EvalFailure, "half-space direction dimension does not match point");
                double dot = 0.0;
                for (std::size_t i = 0; i < x.dim(); ++i) dot += h.direction[i] * x[i];
                return dot <= h.offset ? 1.0 : 0.0;
            },
        },
        g);
    if (!std::isfinite(y)) throw Error(ErrorCode::EvalFailure, "test function not finite at atom");
    return y;
}

double expectation(const TestFunction& g, const FiniteDistribution& d) {
    ExactSum s;
    for (const auto& a : d.atoms()) s.add(a.prob * evaluate(g, a.point));
    return s.value();
}

std::vector<TestFunction> builtin_battery(const ComponentFamily& fam) {
    const std::size_t dim = fam.dim();
    std::vector<TestFunction> out;

    // All exponent vectors with total degree <= 4.
    std::vector<unsigned> e(dim, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned budget) -> void {
        if (i == dim) {
            out.emplace_back(PolynomialTest{{Monomial{1.0, e}}});
            return;
        }
        for (unsigned k = 0; k <= budget; ++k) {
            e[i] = k;
            self(self, i + 1, budget - k);
        }
        e[i] = 0;
    };
    rec(rec, 0, 4);

    std::set<double> norms;
    std::set<double> coords;
    for (std::size_t k = 0; k < fam.size(); ++k) {
        for (const auto& a : fam.finite(k).atoms()) {
            norms.insert(norm(a.point, NormKind::L2));
            for (double c : a.point.coords()) coords.insert(c);
        }
    }
    const std::vector<double> nv(norms.begin(), norms.end());
    const std::vector<double> cv(coords.begin(), coords.end());
    auto pick = [](const std::vector<double>& v, std::size_t i, std::size_t of) {
        return v[(i * (v.size() - 1)) / (of - 1)];
    };
    for (std::size_t i = 0; i < 4; ++i) {
        const double t = pick(nv, i, 4);
        out.emplace_back(NormIndicator{t, Sense::AtLeast, NormKind::L2});
        out.emplace_back(NormIndicator{t, Sense::AtMost, NormKind::L2});
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const double off = pick(cv, i, 4);
        Vector dir(dim);
        dir.set(i % dim, 1.0);
        out.emplace_back(HalfSpaceIndicator{dir, off});
        out.emplace_back(HalfSpaceIndicator{-dir, -off});
    }
    return out;
}

FiniteDistribution regular_cover(const ComponentFamily& fam) {
    const double w = 1.0 / static_cast<double>(fam.size());
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < fam.size(); ++k)
        for (const auto& a : fam.finite(k).atoms()) atoms.push_back({a.point, a.prob * w});
    return FiniteDistribution(std::move(atoms));
}

CheckReport verify_cover(const ComponentFamily& fam, const FiniteDistribution& cover,
                         std::span<const TestFunction> gs) {
    if (cover.dim() != fam.dim()) throw Error(ErrorCode::DimMismatch, "cover and family dimensions differ");
    CheckReport r;
    r.name = "verify_cover";
    r.mode = Mode::Exact;
    double worst = -1.0;
    const double n = static_cast<double>(fam.size());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const double cover_side = expectation(gs[i], cover);
        ExactSum comp;
        for (std::size_t k = 0; k < fam.size(); ++k) comp.add(expectation(gs[i], fam.finite(k)));
        const double comp_side = comp.value() / n;
        const double disc = std::abs(cover_side - comp_side);
        r.details.push_back({{"g", static_cast<double>(i)},
                             {"cover", cover_side},
                             {"component_mean", comp_side},
                             {"discrepancy", disc}});
        if (disc > worst) {
            worst = disc;
            r.lhs = cover_side;
            r.rhs = comp_side;
        }
    }
    r.margin = gs.empty() ? 0.0 : -worst;
    r.pass = r.margin >= -kExactTolerance;
    r.values = {{"test_functions", static_cast<double>(gs.size())}, {"max_discrepancy", std::max(worst, 0.0)}};
    return r;
}

double cdf_mean_discrepancy(const ComponentFamily& fam, const FiniteDistribution& cover) {
    if (fam.dim() != 1 || cover.dim() != 1)
        throw Error(ErrorCode::DimMismatch, "distribution functions are defined for dimension 1 only");
    auto cdf = [](const FiniteDistribution& d, double t) {
        ExactSum s;
        for (const auto& a : d.atoms())
            if (a.point[0] <= t) s.add(a.prob);
        return s.value();
    };
    std::set<double> ts;
    for (const auto& a : cover.atoms()) ts.insert(a.point[0]);
    for (std::size_t k = 0; k < fam.size(); ++k)
        for (const auto& a : fam.finite(k).atoms()) ts.insert(a.point[0]);
    double worst = 0.0;
    for (double t : ts) {
        ExactSum m;
        for (std::size_t k = 0; k < fam.size(); ++k) m.add(cdf(fam.finite(k), t));
        worst = std::max(worst, std::abs(cdf(cover, t) - m.value() / static_cast<double>(fam.size())));
    }
    return worst;
}

FiniteDistribution symmetrize(const FiniteDistribution& d) {
    return exact::convolve(d, affine(d, -1.0, Vector::zero(d.dim())));
}

FiniteDistribution truncate(const FiniteDistribution& d, double L, NormKind k) {
    if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation level must be positive");
    std::vector<Atom> atoms;
    atoms.reserve(d.size());
    for (const auto& a : d.atoms())
        atoms.push_back({norm(a.point, k) < L ? a.point : Vector::zero(d.dim()), a.prob});
    return FiniteDistribution(std::move(atoms));
}

FiniteDistribution affine(const FiniteDistribution& d, double scale, const Vector& shift) {
    if (shift.dim() != d.dim()) throw Error(ErrorCode::DimMismatch, "shift dimension does not match law");
    std::vector<Atom> atoms;
    atoms.reserve(d.size());
    for (const auto& a : d.atoms()) atoms.push_back({scale * a.point + shift, a.prob});
    return FiniteDistribution(std::move(atoms));
}

Vector mean(const FiniteDistribution& d) {
    Vector m(d.dim());
    for (std::size_t i = 0; i < d.dim(); ++i) {
        ExactSum s;
        for (const auto& a : d.atoms()) s.add(a.prob * a.point[i]);
        m.set(i, s.value());
    }
    return m;
}

}  // namespace tailgate
