#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tailgate/distribution.hpp"
#include "tailgate/exact.hpp"
#include "tailgate/mc.hpp"
#include "tailgate/report.hpp"

// Checkers for the tail-comparison inequality P(||S_n|| >= l) <= c P(||~S_n|| >= l/c)
// and for every elementary step used to establish it. Exact-mode checks
// enumerate finite laws through tailgate::exact; grids default to the points
// where the left-hand side jumps, which makes them exhaustive.
namespace tailgate::ineq {

using Grid = std::optional<std::vector<double>>;

struct McOptions {
    std::uint64_t trials = 100'000;
    SeedSpec seed{};
    unsigned workers = 1;
    double level = 0.99;
};

// Exact laws shared by the family checks.
struct FamilyLaws {
    FiniteDistribution sum;          // S_n
    FiniteDistribution cover;        // ~X_1
    FiniteDistribution cover_sum;    // ~S_n
    std::size_t n = 1;
};

FamilyLaws family_laws(const ComponentFamily& fam);

// Law of ~S_n - ~S_n' where ~S_n' reuses the indices I_i of ~S_n: the n-fold
// i.i.d. sum of the cover of the symmetrised components.
FiniteDistribution shared_index_difference(const ComponentFamily& fam);

// ||X||_2 <= ||X^s||_2 + ||E X|| <= 3 ||X||_2
CheckReport check_disymm2(const FiniteDistribution& d, NormKind k);

// ||S_n||_2 <= 12 ||~S_n||_2, with the intermediate ||S_n - S_n'||_2 <= 4 ||~S_n - ~S_n'||_2
// and the full constant chain.
CheckReport check_comp_moment(const ComponentFamily& fam, NormKind k);

// P(||S_n|| - M >= l) <= 2 P(||S_n^s|| >= l), M the lower median of ||S_n||.
CheckReport check_median_symmetrization(const ComponentFamily& fam, NormKind k, const Grid& grid = {});

// P(||S_n - S_n'|| >= l) <= 16 P(||~S_n|| >= l/4), together with the
// symmetrisation-tail step P(||X - X'|| >= t) <= 2 P(||X|| >= t/2).
CheckReport check_first_ineq(const ComponentFamily& fam, NormKind k, const Grid& grid = {});
// Monte Carlo version over the array coupling; passes on CI-consistency.
CheckReport check_first_ineq_mc(const ComponentFamily& fam, NormKind k, const std::vector<double>& grid,
                                const McOptions& mc);

// P(max_k ||U_k|| >= 2t) <= P(max_k ||U_1 + ... + U_k|| >= t), by enumerating
// the product space (n <= 6).
CheckReport check_elementary_maximal(const ComponentFamily& fam, NormKind k, const Grid& t_grid = {});

struct HitczenkoEstimate {
    ConstantEstimate c0;  // ||S*||_q <= c0 (q/p) (||S*||_p + ||X*||_q)
    ConstantEstimate c1;  // ||S*||_p <= c1 ||S_n||_p
};

// Monte Carlo estimates of the smallest constants for this instance; value
// is widened by three standard errors on each moment in the unfavourable
// direction, the point estimate is kept in values.
HitczenkoEstimate estimate_hitczenko_constants(const FiniteDistribution& d, std::size_t n, double q, double p,
                                               NormKind k, const McOptions& mc);

// Largest c in (0,1] with (E||S_n||)^2 >= c (E||S_n||^2 - L^2/c), S_n an
// i.i.d. sum of n copies of d; found by bisection.
ConstantEstimate check_rosenthal_form(const FiniteDistribution& d, std::size_t n, double L, NormKind k);

struct TruncationParams {
    std::optional<double> L;  // if absent, L = 2 c1 eps M with M the median of ||S_n||
    double c1 = 1.0;
    double eps = 0.01;
    double delta = 0.01;
    std::optional<double> c2;  // only used to report the proof's parameter conditions
};

CheckReport check_truncation_pipeline(const ComponentFamily& fam, NormKind k, const TruncationParams& params);

// n x <= 2 (1 - (1-x)^n) wherever 1 - (1-x)^n <= 1/2, for all n in 1..n_max on
// a uniform grid of `points` values in [0,1].
CheckReport check_scalar_union_bound(std::size_t n_max = 64, std::size_t points = 1000);

// P(Xi >= l E Xi) >= (1-l)^2 (E Xi)^2 / E Xi^2 for Xi = ||X||. Reported with
// lhs = the bound and rhs = the probability so that pass <=> margin >= 0.
CheckReport check_paley_zygmund(const FiniteDistribution& d, double lambda, NormKind k);
// Same over a grid of l in (0,1); by default 99 uniform points plus every
// point where the probability jumps.
CheckReport check_paley_zygmund_grid(const FiniteDistribution& d, NormKind k, const Grid& grid = {});

CheckReport check_mean_identity(const ComponentFamily& fam);

inline constexpr double kMaxConstant = 1e6;
inline constexpr double kConstantTolerance = 1e-3;

// Whether P(||S_n|| >= l) <= c P(||~S_n|| >= l/c) at every l of the grid.
bool theorem_feasible(const FamilyLaws& laws, NormKind k, double c, const std::vector<double>& grid);
std::vector<double> theorem_grid(const FamilyLaws& laws, NormKind k);

// Minimal feasible c by bisection on [1, 1e6] to relative tolerance 1e-3.
// Throws INFEASIBLE when even c = 1e6 fails.
ConstantEstimate check_theorem_main(const ComponentFamily& fam, NormKind k, const Grid& grid = {},
                                    Mode mode = Mode::Exact, const McOptions& mc = {});

// Minimal c over a grid with tails given as callables; shared by both modes.
template <class Lhs, class Rhs>
double minimal_constant(const std::vector<double>& grid, Lhs&& lhs, Rhs&& rhs, double tol = kConstantTolerance);

// Converse counterexample with X_1 Rademacher, X_2..X_n = 0 and
// l = n. lhs = P(|~S_n| >= n) > 0 while rhs = c P(|S_n| >= n/c) = 0 for all
// c in [1, n). pass <=> the counterexample is confirmed.
CheckReport converse_counterexample(std::size_t n);

struct Survey {
    std::vector<ConstantEstimate> estimates;
    double max_c = 0.0;
};

Survey min_c_family_survey(const std::vector<ComponentFamily>& corpus, NormKind k, Mode mode = Mode::Exact,
                           const McOptions& mc = {});

// Exact value of the theorem's constant on a given grid (for comparing a
// Monte Carlo bracket against the oracle on the same grid).
double exact_min_constant(const FamilyLaws& laws, NormKind k, const std::vector<double>& grid);

}  // namespace tailgate::ineq

#include "tailgate/detail/minimal_constant.hpp"
