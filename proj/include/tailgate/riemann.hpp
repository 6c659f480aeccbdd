#pragma once

#include <cstdint>
#include <vector>

#include "tailgate/integrand.hpp"
#include "tailgate/mc.hpp"
#include "tailgate/rng.hpp"

// Randomly sampled Riemann sums R_n f = n^-1 sum_k f(x_k), x_k uniform on the
// k-th cell [(k-1)/n, k/n], and their i.i.d. counterpart.
namespace tailgate::riemann {

struct RiemannDraw {
    std::size_t n = 0;
    std::vector<double> points;
    double value = 0.0;
};

RiemannDraw riemann_sample(const IntegrandSpec& f, std::size_t n, SeedSpec seed);
RiemannDraw riemann_sample(const IntegrandSpec& f, std::size_t n, Stream& rng);
// Same draw without keeping the points.
double riemann_value(const IntegrandSpec& f, std::size_t n, Stream& rng);

// n^-1 sum_i f(U_i) with U_i i.i.d. uniform on [0,1].
double plain_mc_sample(const IntegrandSpec& f, std::size_t n, SeedSpec seed);
double plain_mc_value(const IntegrandSpec& f, std::size_t n, Stream& rng);

// f(x_K) for K uniform on {1..n} and x_K uniform on cell K.
double stratified_summand(const IntegrandSpec& f, std::size_t n, Stream& rng);
// f(U) for U uniform on [0,1], avoiding exceptional points.
double uniform_value(const IntegrandSpec& f, Stream& rng);

// Mean and variance of a sample with the standard error of each; the
// variance error uses the fourth central moment.
struct SampleSummary {
    std::uint64_t count = 0;
    double mean = 0.0;
    double mean_se = 0.0;
    double variance = 0.0;
    double variance_se = 0.0;
};

SampleSummary summarize(const std::vector<double>& xs);

struct VarianceStudy {
    std::size_t n = 0;
    SampleSummary stratified;
    SampleSummary plain;
    // stratified variance + z se < plain variance - z se at the given level.
    bool separated = false;
};

VarianceStudy variance_study(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed,
                             double level = 0.99, unsigned workers = 1);

// Draws of R_n f (stratified) or of the plain estimate, in trial order.
std::vector<double> riemann_values(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed,
                                   unsigned workers = 1);
std::vector<double> plain_values(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed,
                                 unsigned workers = 1);

struct TailSumRow {
    std::size_t n = 0;
    mc::TailEstimate tail;
    double partial_sum = 0.0;        // running sum of p_hat
    double partial_sum_upper = 0.0;  // running sum of ci_high
};

struct TailSumReport {
    double epsilon = 0.0;
    double integral = 0.0;
    std::vector<TailSumRow> rows;
    // (U(n_max) - U(3 n_max / 4)) / U(n_max) for the upper partial sum U; 0 when U = 0.
    double stabilization = 0.0;
    // Least-squares slope of log p_hat against log n over rows with hits.
    double decay_exponent = 0.0;
};

inline constexpr std::size_t kMaxTailSumN = std::size_t{1} << 14;
inline constexpr double kStabilizationThreshold = 0.25;

// P(|R_n f - A| >= eps) for every n in 1..n_max; row n draws from seed.child(n).
TailSumReport tail_sum_diagnostic(const IntegrandSpec& f, double eps, std::size_t n_max, std::uint64_t trials_per_n,
                                  SeedSpec seed, double level = 0.99, unsigned workers = 1);

struct ConvergenceReport {
    std::vector<std::size_t> schedule;
    std::size_t tail_from = 0;
    double epsilon = 0.0;
    double integral = 0.0;
    // Per trajectory: max |R_n f - A| over schedule entries n >= tail_from.
    std::vector<double> max_tail_deviation;
    double fraction_within = 0.0;
};

// Trajectory j draws R_n f for each n of the schedule from seed.child(j).
ConvergenceReport convergence_experiment(const IntegrandSpec& f, const std::vector<std::size_t>& schedule,
                                         std::size_t trajectories, std::size_t tail_from, double eps, SeedSpec seed,
                                         unsigned workers = 1);

}  // namespace tailgate::riemann
