#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tailgate/distribution.hpp"

// Brute-force references written independently of the library's exact
// engine: plain enumeration of product spaces into ordered maps.
namespace oracle {

using Point = std::vector<double>;
using Law = std::map<Point, double>;

inline Point coords(const tailgate::Vector& v) { return {v.coords().begin(), v.coords().end()}; }

inline Law law_of(const tailgate::FiniteDistribution& d) {
    Law out;
    for (const auto& a : d.atoms()) out[coords(a.point)] += a.prob;
    return out;
}

// Law of X_1 + ... + X_n by walking every outcome of the product space.
inline Law sum_law(const std::vector<tailgate::FiniteDistribution>& comps) {
    Law out;
    std::vector<std::size_t> idx(comps.size(), 0);
    const std::size_t dim = comps.front().dim();
    for (;;) {
        Point s(dim, 0.0);
        double p = 1.0;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& a = comps[i].atoms()[idx[i]];
            for (std::size_t j = 0; j < dim; ++j) s[j] += a.point[j];
            p *= a.prob;
        }
        for (double& x : s) x += 0.0;
        out[s] += p;
        std::size_t i = 0;
        while (i < comps.size() && ++idx[i] == comps[i].size()) idx[i++] = 0;
        if (i == comps.size()) break;
    }
    return out;
}

inline double l2(const Point& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double tail(const Law& law, double lambda) {
    double s = 0;
    for (const auto& [x, p] : law)
        if (l2(x) >= lambda) s += p;
    return s;
}

// Mixture (1/n) sum_k law(X_k).
inline Law mixture(const std::vector<tailgate::FiniteDistribution>& comps) {
    Law out;
    for (const auto& c : comps)
        for (const auto& a : c.atoms()) out[coords(a.point)] += a.prob / static_cast<double>(comps.size());
    return out;
}

inline tailgate::FiniteDistribution to_distribution(const Law& law) {
    std::vector<tailgate::Atom> atoms;
    for (const auto& [x, p] : law) atoms.push_back({tailgate::Vector(std::span<const double>(x)), p});
    return tailgate::FiniteDistribution(std::move(atoms));
}

}  // namespace oracle
