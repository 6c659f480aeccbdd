#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tailgate/distribution.hpp"
#include "tailgate/parallel.hpp"
#include "tailgate/rng.hpp"
#include "tailgate/stats.hpp"

// Deterministic Monte Carlo. Trials are cut into fixed-size blocks; block b
// draws from the stream seed.child(b) and partial results are reduced in
// block order, so estimates do not depend on the worker count.
namespace tailgate::mc {

inline constexpr std::uint64_t kBlockTrials = 4096;

// Precomputed sampling tables for the components of a family.
class FamilySampler {
public:
    explicit FamilySampler(const ComponentFamily& fam);

    std::size_t size() const noexcept { return tables_.size(); }
    std::size_t dim() const noexcept { return dim_; }

    // One draw of X_k (k is 0-based).
    Vector draw(std::size_t k, Stream& rng) const;
    // One draw of X_I with I uniform: the regular cover.
    Vector draw_cover(Stream& rng) const;

private:
    struct FiniteTable {
        std::vector<Vector> points;
        std::vector<double> cumulative;
    };
    std::vector<std::variant<FiniteTable, ContinuousSpec>> tables_;
    std::size_t dim_ = 0;
};

Vector sample_cover(const ComponentFamily& fam, SeedSpec seed);

// One realisation of the array coupling (I_i, X_{i,j}, X'_{i,j}).
// Indices are 0-based. x and x_prime are the n x n arrays in row-major order
// and are only populated by the literal construction.
struct CouplingDraw {
    std::vector<std::size_t> indices;
    std::vector<Vector> x;
    std::vector<Vector> x_prime;
    Vector s;              // S_n = sum_j X_{1,j}
    Vector s_prime;        // S_n' = sum_j X'_{1,j}
    Vector s_tilde;        // sum_i X_{i,I_i}
    Vector s_tilde_prime;  // sum_i X'_{i,I_i}
    Vector t;              // sum_j X_{1,j} 1{||X_{1,j}|| < L}
    Vector t_tilde;        // sum_i X_{i,I_i} 1{||X_{i,I_i}|| < L}
    double s_star = 0.0;   // max_k ||partial sums of the X_{i,I_i}||
    double x_star = 0.0;   // max_k ||X_{k,I_k}||
};

struct CouplingOptions {
    NormKind norm = NormKind::L2;
    std::optional<double> truncation;  // L; without it T = S
    bool literal = false;              // materialise all 2n^2 entries
};

CouplingDraw array_coupling(const FamilySampler& sampler, Stream& rng, const CouplingOptions& opt = {});
CouplingDraw array_coupling(const ComponentFamily& fam, SeedSpec seed, const CouplingOptions& opt = {});

// (S_n, S_n', S_n - S_n') from pairwise independent copies (X_k, X_k').
// sum_of_symmetrized = sum_k (X_k - X_k'), equal to the difference up to
// rounding; the difference itself is computed as S_n - S_n'.
struct SymmetrizedTriple {
    Vector s;
    Vector s_prime;
    Vector difference;
    Vector sum_of_symmetrized;
};

SymmetrizedTriple coupled_symmetrized_sum(const FamilySampler& sampler, Stream& rng);
SymmetrizedTriple coupled_symmetrized_sum(const ComponentFamily& fam, SeedSpec seed);

struct TailEstimate {
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double level = 0.99;
    SeedSpec seed;
};

TailEstimate make_tail_estimate(std::uint64_t hits, std::uint64_t trials, double level, SeedSpec seed);
// Tail estimate at lambda from an ascending sample of norms.
TailEstimate tail_from_sorted(const std::vector<double>& sorted_norms, double lambda, double level, SeedSpec seed);

using Sampler = std::function<Vector(Stream&)>;

// Runs fn(stream, count) once per block and returns the partials in block order.
template <class Fn>
auto run_blocks(std::uint64_t trials, SeedSpec seed, unsigned workers, Fn&& fn) {
    const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
    return run_ordered(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
        Stream rng(seed.child(b));
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlockTrials;
        return fn(rng, std::min(kBlockTrials, trials - begin));
    });
}

TailEstimate estimate_tail(const Sampler& sampler, double lambda, NormKind k, std::uint64_t trials,
                           SeedSpec seed, double level = 0.99, unsigned workers = 1);

// Norms of `trials` draws, in trial order.
std::vector<double> sample_norms(const Sampler& sampler, NormKind k, std::uint64_t trials, SeedSpec seed,
                                 unsigned workers = 1);

MomentAccumulator estimate_moments(const Sampler& sampler, NormKind k, std::size_t dim, std::uint64_t trials,
                                   SeedSpec seed, unsigned workers = 1);

}  // namespace tailgate::mc
