#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tailgate/distribution.hpp"
#include "tailgate/report.hpp"

namespace tailgate {

// Exact binomial (Clopper-Pearson) interval for hits successes out of trials
// at the given two-sided confidence level. Zero hits give low = 0 and
// high = 1 - (alpha/2)^(1/trials); never a zero-width interval at 0.
Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double level = 0.99);

// Welford mean/variance of a scalar stream, mergeable (Chan et al.).
class RunningStats {
public:
    void push(double x) noexcept;
    void merge(const RunningStats& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    // Unbiased sample variance; 0 for fewer than two samples.
    double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const noexcept;
    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

// One-pass moments of a vector-valued sample: mean vector, first and second
// moments of the norm, and the running maximum norm.
class MomentAccumulator {
public:
    MomentAccumulator() = default;
    MomentAccumulator(std::size_t dim, NormKind k) : mean_(dim), norm_kind_(k) {}

    void push(const Vector& x);
    // Associative and commutative up to rounding.
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const noexcept { return norm_.count(); }
    const Vector& mean() const noexcept { return mean_; }
    double mean_norm() const noexcept { return norm_.mean(); }
    double mean_sq_norm() const noexcept { return sq_norm_.mean(); }
    double sum_sq_norm() const noexcept { return sq_norm_.mean() * static_cast<double>(count()); }
    double max_norm() const noexcept { return norm_.count() ? norm_.max() : 0.0; }
    const RunningStats& norm_stats() const noexcept { return norm_; }
    const RunningStats& sq_norm_stats() const noexcept { return sq_norm_; }

private:
    Vector mean_;
    NormKind norm_kind_ = NormKind::L2;
    RunningStats norm_;
    RunningStats sq_norm_;
};

// sup_t |F_a(t) - F_b(t)| for two empirical samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// sup_t |F_n(t) - F(t)| for a sample against an exact one-dimensional law,
// checked on both sides of every jump.
double ks_against_law(std::vector<double> sample, const FiniteDistribution& law1d);

// Projection of a law onto a direction, as a one-dimensional law.
FiniteDistribution project(const FiniteDistribution& d, const Vector& direction);
double dot(const Vector& a, const Vector& b);

}  // namespace tailgate
