#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "tailgate/integrand.hpp"
#include "tailgate/report.hpp"
#include "tailgate/vector.hpp"

namespace tailgate {

struct Atom {
    Vector point;
    double prob = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

// Finite-support law on R^d. Atoms are kept sorted by point and merged by
// exact coordinate equality; every stored probability is > 0 and the total
// mass is within 1e-9 of one.
class FiniteDistribution {
public:
    // Merges coincident points (summing probabilities in a canonical order)
    // and drops zero-probability atoms. Throws INVALID_ARGUMENT on negative or
    // non-finite probabilities or a total mass off by more than 1e-9, and
    // DIM_MISMATCH on mixed dimensions.
    explicit FiniteDistribution(std::vector<Atom> atoms);

    static FiniteDistribution point_mass(const Vector& x);
    // +-1 with probability 1/2 each along the first axis of R^dim.
    static FiniteDistribution rademacher(std::size_t dim = 1);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    std::span<const Atom> atoms() const noexcept { return atoms_; }
    double total_mass() const noexcept;

    // Probability of exactly this point (0 if absent).
    double prob_of(const Vector& x) const;

    friend bool operator==(const FiniteDistribution&, const FiniteDistribution&) = default;

private:
    std::vector<Atom> atoms_;
    std::size_t dim_ = 0;
};

// One-dimensional continuous laws that the Monte Carlo engine can sample.
struct UniformInterval {
    double a = 0.0;
    double b = 1.0;
};

struct PushforwardOfUniform {
    IntegrandSpec integrand;
    double a = 0.0;
    double b = 1.0;
};

class ContinuousSpec {
public:
    using Variant = std::variant<UniformInterval, PushforwardOfUniform>;
    explicit ContinuousSpec(Variant v);

    const Variant& variant() const noexcept { return v_; }
    std::size_t dim() const noexcept { return 1; }
    double lower() const noexcept;
    double upper() const noexcept;

private:
    Variant v_;
};

using Component = std::variant<FiniteDistribution, ContinuousSpec>;

// The independent summands X_1..X_n.
class ComponentFamily {
public:
    explicit ComponentFamily(std::vector<Component> components);
    explicit ComponentFamily(std::vector<FiniteDistribution> components);

    std::size_t size() const noexcept { return components_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const Component& operator[](std::size_t k) const { return components_[k]; }
    std::span<const Component> components() const noexcept { return components_; }

    bool all_finite() const noexcept;
    // Throws INVALID_ARGUMENT if component k is not finite-support.
    const FiniteDistribution& finite(std::size_t k) const;
    std::vector<FiniteDistribution> finite_components() const;

private:
    std::vector<Component> components_;
    std::size_t dim_ = 0;
};

// Test functions g for the covering identity E g(Y) = (1/n) sum_k E g(X_k).
struct Monomial {
    double coeff = 1.0;
    std::vector<unsigned> exponents;  // one per coordinate
};

struct PolynomialTest {
    std::vector<Monomial> terms;  // total degree of each term <= 4
};

enum class Sense { AtLeast, AtMost };

struct NormIndicator {
    double threshold = 0.0;
    Sense sense = Sense::AtLeast;
    NormKind norm = NormKind::L2;
};

// 1{<direction, x> <= offset}
struct HalfSpaceIndicator {
    Vector direction;
    double offset = 0.0;
};

using TestFunction = std::variant<PolynomialTest, NormIndicator, HalfSpaceIndicator>;

// Throws EVAL_FAILURE when g cannot be evaluated at x.
double evaluate(const TestFunction& g, const Vector& x);
double expectation(const TestFunction& g, const FiniteDistribution& d);

// Every monomial of total degree <= 4 plus 16 indicators (8 norm, 8
// half-space) placed at atom norms and coordinates of the family.
std::vector<TestFunction> builtin_battery(const ComponentFamily& fam);

// Uniform mixture of the components: the law of X_I, I uniform on {1..n}.
FiniteDistribution regular_cover(const ComponentFamily& fam);

CheckReport verify_cover(const ComponentFamily& fam, const FiniteDistribution& cover,
                         std::span<const TestFunction> gs);

// Dim-1 only: P(Y <= t) and the mean of P(X_k <= t), at every atom of the
// family and cover. Returns the largest absolute discrepancy.
double cdf_mean_discrepancy(const ComponentFamily& fam, const FiniteDistribution& cover);

// Law of X - X' for independent copies.
FiniteDistribution symmetrize(const FiniteDistribution& d);

// X * 1{||X|| < L}: the strict inequality keeps atoms of norm exactly L out.
FiniteDistribution truncate(const FiniteDistribution& d, double L, NormKind k);

FiniteDistribution affine(const FiniteDistribution& d, double scale, const Vector& shift);

Vector mean(const FiniteDistribution& d);

}  // namespace tailgate
