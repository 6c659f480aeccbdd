#pragma once

#include <cstddef>
#include <string_view>

#include "tailgate/distribution.hpp"

// Exact computation over finite-support laws. This is the oracle every
// inequality checker and every Monte Carlo estimate is compared against, so
// nothing here approximates: a computation that would exceed the support cap
// fails with SUPPORT_OVERFLOW instead of pruning atoms.
namespace tailgate::exact {

inline constexpr std::size_t kSupportCap = 1'000'000;

enum class Provenance { IndependentFamily, IidPower, Raw };

std::string_view to_string(Provenance p) noexcept;

struct SumLaw {
    FiniteDistribution law;
    Provenance provenance = Provenance::Raw;
    std::size_t n = 1;
};

// Law of A + B for independent A ~ a, B ~ b.
FiniteDistribution convolve(const FiniteDistribution& a, const FiniteDistribution& b,
                            std::size_t cap = kSupportCap);

// S_n = X_1 + ... + X_n, a left fold of convolve.
SumLaw sum_family(const ComponentFamily& fam, std::size_t cap = kSupportCap);

// n-fold self-convolution by binary exponentiation.
SumLaw iid_sum(const FiniteDistribution& d, std::size_t n, std::size_t cap = kSupportCap);
// Same law by a plain left fold; kept as the reference for iid_sum.
SumLaw iid_sum_linear(const FiniteDistribution& d, std::size_t n, std::size_t cap = kSupportCap);

// P(||S|| >= lambda).
double tail(const FiniteDistribution& s, double lambda, NormKind k);

// E ||S||^p for p > 0.
double norm_moment(const FiniteDistribution& s, NormKind k, double p);
inline double moment2(const FiniteDistribution& s, NormKind k) { return norm_moment(s, k, 2.0); }
// ||S||_p = (E ||S||^p)^{1/p}
double lp_norm(const FiniteDistribution& s, NormKind k, double p);

struct MedianResult {
    double value = 0.0;
    std::string_view convention = "LOWER_MEDIAN";
};

// Smallest atom norm m with P(||S|| <= m) >= 1/2.
MedianResult median_norm(const FiniteDistribution& s, NormKind k);

// Distinct atom norms of s, ascending.
std::vector<double> support_norms(const FiniteDistribution& s, NormKind k);

// Law of ||S|| as a one-dimensional distribution.
FiniteDistribution norm_law(const FiniteDistribution& s, NormKind k);

}  // namespace tailgate::exact
