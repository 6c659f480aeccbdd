#include "tailgate/integrand.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailgate/error.hpp"

namespace tailgate {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

IntegrandSpec::IntegrandSpec(Variant v) : v_(std::move(v)) {
    std::visit(
        Overloaded{
            [this](const PolynomialIntegrand& p) {
                if (p.coeffs.empty())
                    throw Error(ErrorCode::InvalidArgument, "polynomial needs at least one coefficient");
                for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
                    if (!std::isfinite(p.coeffs[i]))
                        throw Error(ErrorCode::InvalidArgument, "non-finite polynomial coefficient");
                    integral_ += p.coeffs[i] / static_cast<double>(i + 1);
                }
            },
            [this](const StepIntegrand& s) {
                if (s.values.size() != s.breakpoints.size() + 1)
                    throw Error(ErrorCode::InvalidArgument,
                                "step integrand needs exactly one more value than breakpoints");
                double prev = 0.0;
                for (std::size_t j = 0; j < s.breakpoints.size(); ++j) {
                    const double b = s.breakpoints[j];
                    if (!(b > prev) || !(b < 1.0))
                        throw Error(ErrorCode::InvalidArgument,
                                    "step breakpoints must be strictly increasing inside (0,1)");
                    integral_ += s.values[j] * (b - prev);
                    prev = b;
                }
                integral_ += s.values.back() * (1.0 - prev);
            },
            [this](const PowerIntegrand& p) {
                if (!(p.alpha > -0.5) || !std::isfinite(p.alpha) || !std::isfinite(p.scale))
                    throw Error(ErrorCode::InvalidArgument,
                                "power integrand requires finite alpha > -1/2 (square integrability)");
                integral_ = p.scale / (p.alpha + 1.0);
                if (p.alpha < 0.0) exceptional_.push_back(0.0);
            },
        },
        v_);
}

bool IntegrandSpec::is_exceptional(double x) const noexcept {
    return std::find(exceptional_.begin(), exceptional_.end(), x) != exceptional_.end();
}

bool IntegrandSpec::is_constant() const noexcept {
    return std::visit(Overloaded{
                          [](const PolynomialIntegrand& p) {
                              return std::all_of(p.coeffs.begin() + 1, p.coeffs.end(),
                                                 [](double c) { return c == 0.0; });
                          },
                          [](const StepIntegrand& s) {
                              return std::all_of(s.values.begin(), s.values.end(),
                                                 [&](double v) { return v == s.values.front(); });
                          },
                          [](const PowerIntegrand& p) { return p.scale == 0.0 || p.alpha == 0.0; },
                      },
                      v_);
}

double IntegrandSpec::operator()(double x) const {
    const double y = std::visit(
        Overloaded{
            [x](const PolynomialIntegrand& p) {
                double acc = 0.0;
                for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
                return acc;
            },
            [x](const StepIntegrand& s) {
                const auto j = std::upper_bound(s.breakpoints.begin(), s.breakpoints.end(), x) -
                               s.breakpoints.begin();
                return s.values[static_cast<std::size_t>(j)];
            },
            [x](const PowerIntegrand& p) {
                if (p.alpha == 0.0) return p.scale;
                return p.scale * std::pow(x, p.alpha);
            },
        },
        v_);
    if (!std::isfinite(y))
        throw Error(ErrorCode::EvalFailure, "integrand not finite at x=" + std::to_string(x));
    return y;
}

}  // namespace tailgate
