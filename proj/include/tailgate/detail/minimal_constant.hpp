#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace tailgate::ineq {

// F(c) = for all l in grid: lhs(l) <= c * rhs(l / c) is monotone in c
// (rhs is a nonincreasing tail, so l/c shrinking only raises it), which is
// what makes the bisection valid. Returns +inf if F(kMaxConstant) fails.
template <class Lhs, class Rhs>
double minimal_constant(const std::vector<double>& grid, Lhs&& lhs, Rhs&& rhs, double tol) {
    constexpr double kSlack = 1e-12;
    auto feasible = [&](double c) {
        for (double l : grid)
            if (lhs(l) > c * rhs(l / c) + kSlack) return false;
        return true;
    };
    if (feasible(1.0)) return 1.0;
    if (!feasible(kMaxConstant)) return std::numeric_limits<double>::infinity();
    double lo = 1.0, hi = kMaxConstant;
    while (hi > lo * (1.0 + tol)) {
        const double mid = std::sqrt(lo * hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace tailgate::ineq
