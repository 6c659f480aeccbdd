#pragma once

#include <variant>
#include <vector>

namespace tailgate {

// Closed analytic integrands on [0,1] whose exact integrals are known in
// closed form.
struct PolynomialIntegrand {
    std::vector<double> coeffs;  // f(x) = sum_i coeffs[i] x^i
};

// Right-continuous step function: values[j] on [b_j, b_{j+1}) with b_0 = 0
// and b_{m+1} = 1. Breakpoints strictly increasing inside (0,1).
struct StepIntegrand {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

// f(x) = scale * x^alpha, alpha > -1/2 so that f is square integrable.
struct PowerIntegrand {
    double alpha = 1.0;
    double scale = 1.0;
};

class IntegrandSpec {
public:
    using Variant = std::variant<PolynomialIntegrand, StepIntegrand, PowerIntegrand>;

    explicit IntegrandSpec(Variant v);

    static IntegrandSpec constant(double c) { return IntegrandSpec(PolynomialIntegrand{{c}}); }
    static IntegrandSpec identity() { return IntegrandSpec(PolynomialIntegrand{{0.0, 1.0}}); }

    const Variant& variant() const noexcept { return v_; }

    // A = integral of f over [0,1], from the antiderivative.
    double exact_integral() const noexcept { return integral_; }
    // Points where f may not be evaluated; a draw landing there is redrawn.
    const std::vector<double>& exceptional_points() const noexcept { return exceptional_; }
    bool is_exceptional(double x) const noexcept;
    bool is_constant() const noexcept;

    // Throws EVAL_FAILURE on a non-finite value at a regular point.
    double operator()(double x) const;

private:
    Variant v_;
    double integral_ = 0.0;
    std::vector<double> exceptional_;
};

}  // namespace tailgate
