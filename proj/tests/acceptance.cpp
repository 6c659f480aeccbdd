// Acceptance criteria runner: `acceptance N` evaluates criterion N (1..10),
// prints one "criterion N: PASS|FAIL ..." line and exits non-zero on FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "tailgate/corpus.hpp"
#include "tailgate/exact.hpp"
#include "tailgate/inequality.hpp"
#include "tailgate/mc.hpp"
#include "tailgate/riemann.hpp"
#include "tailgate/runner.hpp"

using namespace tailgate;

namespace {

// Pinned tolerances and budgets.
constexpr double kCheckTolerance = 1e-9;
constexpr double kCoverTolerance = 1e-9;
constexpr double kRegressionTolerance = 1e-3;
constexpr double kSearchSlack = 1e-3;
constexpr double kSigmaBand = 3.0;
constexpr double kConvergenceEps = 0.05;
constexpr double kConvergenceFraction = 0.99;
constexpr double kMomentSuiteSeconds = 10.0;
constexpr double kCounterexampleSeconds = 1.0;
constexpr double kRiemannSeconds = 60.0;
constexpr std::uint64_t kTheoremTrials = 100'000;
constexpr std::uint64_t kTheoremSeeds[] = {0x5eed0001, 0x5eed0002};
constexpr std::uint64_t kRiemannSeed = 0x52494d;

// Frozen regression values. Corpus maxima of the moment ratios over all three
// norms must reproduce bit for bit; the L2 survey maximum to kRegressionTolerance.
constexpr double kFrozenCompRatioMax = 0x1.0da729a4bc81ep+0;
constexpr double kFrozenMoment1RatioMax = 0x1.08a4b43102f69p+0;
constexpr double kFrozenSurveyMax = 1.6881731638044617;

constexpr NormKind kNorms[] = {NormKind::L1, NormKind::L2, NormKind::LInf};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double value(const Record& r, const std::string& key) {
    for (const auto& [k, v] : r)
        if (k == key) return v;
    return std::nan("");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << " failed: ";
            else detail << "; ";
            detail << what;
        }
        pass = pass && ok;
    }
};

bool nonzero_law(const FiniteDistribution& d) {
    for (const auto& a : d.atoms())
        if (norm(a.point, NormKind::L2) > 0.0) return true;
    return false;
}

Outcome symmetrization_bounds() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto corpus = corpus::distribution_corpus();
    std::size_t failed = 0;
    double worst = INFINITY;
    for (const auto& d : corpus)
        for (NormKind k : kNorms) {
            const auto r = ineq::check_disymm2(d, k);
            failed += !(r.pass && r.margin >= -kCheckTolerance);
            worst = std::min(worst, r.margin);
        }
    const double t = seconds_since(t0);
    o.require(corpus.size() >= 200, "corpus smaller than 200");
    o.require(failed == 0, std::to_string(failed) + " violations");
    o.require(t <= kMomentSuiteSeconds, "runtime " + fmt(t) + " s");
    o.detail << " distributions=" << corpus.size() << " min_margin=" << fmt(worst) << " seconds=" << fmt(t);
    return o;
}

struct RatioMax {
    double ratio = 0.0, moment1 = 0.0;
    std::size_t violations = 0;
};

RatioMax comp_moment_maxima() {
    RatioMax m;
    for (const auto& fam : corpus::family_corpus())
        for (NormKind k : kNorms) {
            const auto r = ineq::check_comp_moment(fam, k);
            const double ratio = value(r.values, "ratio"), m1 = value(r.values, "moment1_ratio");
            m.violations += !(r.pass && ratio <= 12.0 && m1 <= 4.0);
            m.ratio = std::max(m.ratio, ratio);
            m.moment1 = std::max(m.moment1, m1);
        }
    return m;
}

Outcome comp_moment_suite() {
    Outcome o;
    const auto a = comp_moment_maxima();
    const auto b = comp_moment_maxima();
    o.require(corpus::family_corpus().size() >= 100, "corpus smaller than 100");
    o.require(a.violations == 0, std::to_string(a.violations) + " violations");
    o.require(a.ratio == b.ratio && a.moment1 == b.moment1, "re-run differs");
    o.require(a.ratio == kFrozenCompRatioMax, "ratio max " + fmt(a.ratio) + " != frozen " + fmt(kFrozenCompRatioMax));
    o.require(a.moment1 == kFrozenMoment1RatioMax,
              "moment1 max " + fmt(a.moment1) + " != frozen " + fmt(kFrozenMoment1RatioMax));
    o.detail << " max_ratio=" << fmt(a.ratio) << " max_moment1_ratio=" << fmt(a.moment1);
    return o;
}

Outcome median_suite() {
    Outcome o;
    std::size_t failed = 0, points = 0;
    for (const auto& fam : corpus::family_corpus())
        for (NormKind k : kNorms) {
            const auto r = ineq::check_median_symmetrization(fam, k);
            failed += !r.pass;
            points += r.details.size();
        }
    o.require(failed == 0, std::to_string(failed) + " violations");
    o.detail << " grid_points=" << points;
    return o;
}

Outcome first_ineq_suite() {
    Outcome o;
    std::size_t composite = 0, step = 0;
    for (const auto& fam : corpus::family_corpus())
        for (NormKind k : kNorms) {
            const auto r = ineq::check_first_ineq(fam, k);
            composite += value(r.values, "composite_holds") != 1.0;
            step += value(r.values, "symmetrization_step_holds") != 1.0;
        }
    o.require(composite == 0, std::to_string(composite) + " composite violations");
    o.require(step == 0, std::to_string(step) + " symmetrization-step violations");
    return o;
}

Outcome theorem() {
    Outcome o;
    const auto corpus = corpus::theorem_corpus();
    double max_c = 0.0;
    try {
        const auto s = ineq::min_c_family_survey(corpus, NormKind::L2);
        max_c = s.max_c;
        for (const auto& e : s.estimates) o.require(e.value <= 1e6, "c_min above 1e6");
    } catch (const Error& e) {
        o.require(false, e.what());
        return o;
    }
    o.require(std::abs(max_c - kFrozenSurveyMax) <= kRegressionTolerance * kFrozenSurveyMax,
              "max c_min " + fmt(max_c) + " vs frozen " + fmt(kFrozenSurveyMax));

    std::size_t inconsistent = 0;
    for (std::uint64_t seed : kTheoremSeeds) {
        ineq::McOptions mc;
        mc.trials = kTheoremTrials;
        mc.seed = SeedSpec{seed, 0};
        mc.workers = workers();
        const auto s = ineq::min_c_family_survey(corpus, NormKind::L2, Mode::MonteCarlo, mc);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto& e = s.estimates[i];
            const double exact_c = ineq::exact_min_constant(ineq::family_laws(corpus[i]), NormKind::L2, e.lambda_grid);
            const bool ok = e.bracket && e.bracket->low <= exact_c * (1.0 + kSearchSlack) &&
                            exact_c <= e.bracket->high * (1.0 + kSearchSlack);
            if (!ok) {
                ++inconsistent;
                o.detail << " [seed " << seed << " instance " << i << " exact " << fmt(exact_c) << " bracket "
                         << (e.bracket ? fmt(e.bracket->low) + ".." + fmt(e.bracket->high) : "none") << "]";
            }
        }
    }
    o.require(inconsistent == 0, std::to_string(inconsistent) + " MC brackets miss the exact constant");
    o.detail << " instances=" << corpus.size() << " max_c=" << fmt(max_c);
    return o;
}

Outcome counterexample() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t n : {2u, 3u, 4u}) {
        const auto r = ineq::converse_counterexample(n);
        const double bound = std::pow(std::pow(2.0, -(static_cast<double>(n) + 1.0)), static_cast<double>(n));
        o.require(r.rhs == 0.0, "rhs nonzero at n=" + std::to_string(n));
        o.require(r.lhs > 0.0, "lhs zero at n=" + std::to_string(n));
        o.require(r.lhs >= bound, "lower bound fails at n=" + std::to_string(n));
        if (n == 3) o.require(r.lhs == 1.0 / 108.0, "lhs(3) = " + fmt(r.lhs));
        o.detail << " lhs(" << n << ")=" << fmt(r.lhs);
    }
    const double t = seconds_since(t0);
    o.require(t < kCounterexampleSeconds, "runtime " + fmt(t) + " s");
    return o;
}

Outcome riemann_lab() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const SeedSpec seed{kRiemannSeed, 0};
    const auto identity = IntegrandSpec::identity();
    for (std::size_t n : {4u, 16u, 64u}) {
        const double dn = static_cast<double>(n);
        const auto v = riemann::variance_study(identity, n, 10'000, seed.child(n), 0.99, workers());
        // R_n x - 1/2 is n^-2 times a sum of n uniforms on [-1/2, 1/2].
        const double var = 1.0 / (12.0 * dn * dn * dn);
        const double mu4 = (3.0 * dn * dn / 144.0 - dn / 120.0) / std::pow(dn, 8);
        const double N = static_cast<double>(v.stratified.count);
        const double se = std::sqrt((mu4 - var * var) / N + 2.0 * var * var / (N * (N - 1.0)));
        o.require(std::abs(v.stratified.variance - var) <= kSigmaBand * se, "variance out of band at n=" + std::to_string(n));
        o.require(v.separated, "no CI separation at n=" + std::to_string(n));
    }
    const std::vector<std::size_t> schedule{16, 32, 64, 128, 256, 512, 1024};
    const auto conv = riemann::convergence_experiment(IntegrandSpec(PowerIntegrand{-1.0 / 3.0, 1.0}), schedule, 200,
                                                      256, kConvergenceEps, seed.child(1000), workers());
    o.require(std::abs(conv.integral - 1.5) <= 1e-15, "integral " + fmt(conv.integral));
    o.require(conv.fraction_within >= kConvergenceFraction,
              "power(-1/3) fraction within " + fmt(conv.fraction_within) + " < " + fmt(kConvergenceFraction));
    const double t = seconds_since(t0);
    o.require(t <= kRiemannSeconds, "runtime " + fmt(t) + " s");
    o.detail << " fraction_within=" << fmt(conv.fraction_within) << " seconds=" << fmt(t);
    return o;
}

Outcome cover_identity() {
    Outcome o;
    std::size_t failed = 0, cdf_failed = 0, dim1 = 0;
    const auto corpus = corpus::cover_corpus();
    for (const auto& fam : corpus) {
        const auto cover = regular_cover(fam);
        const auto r = verify_cover(fam, cover, builtin_battery(fam));
        failed += !(r.pass && -r.margin <= kCoverTolerance);
        if (fam.dim() == 1) {
            ++dim1;
            cdf_failed += !(cdf_mean_discrepancy(fam, cover) <= kCoverTolerance);
        }
    }
    o.require(corpus.size() >= 100, "corpus smaller than 100");
    o.require(failed == 0, std::to_string(failed) + " cover failures");
    o.require(cdf_failed == 0, std::to_string(cdf_failed) + " distribution-function failures");
    o.detail << " families=" << corpus.size() << " dim1=" << dim1;
    return o;
}

bool replays(const std::string& config_text, unsigned run_workers, unsigned replay_workers) {
    auto c = parse_config(Json::parse(config_text));
    c.workers = run_workers;
    return replay(canonical(run(c).report), replay_workers).identical;
}

// Coverage of 99% Clopper-Pearson intervals against exact tails over many seeds.
bool calibration(std::string& note) {
    const auto corpus = corpus::family_corpus();
    int worst = 100;
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& fam = corpus[idx];
        const auto sum = exact::sum_family(fam).law;
        const auto cover_sum = exact::iid_sum(regular_cover(fam), fam.size()).law;
        const double lambda = std::max(0.5, exact::median_norm(cover_sum, NormKind::L2).value);
        const double ps = exact::tail(sum, lambda, NormKind::L2);
        const double pt = exact::tail(cover_sum, lambda, NormKind::L2);
        const mc::FamilySampler sampler(fam);
        int cs = 0, ct = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            Stream rng(SeedSpec{0xca1b + s, idx});
            std::uint64_t hs = 0, ht = 0;
            for (int t = 0; t < 1000; ++t) {
                const auto d = mc::array_coupling(sampler, rng);
                hs += norm(d.s, NormKind::L2) >= lambda;
                ht += norm(d.s_tilde, NormKind::L2) >= lambda;
            }
            const auto es = mc::make_tail_estimate(hs, 1000, 0.99, {});
            const auto et = mc::make_tail_estimate(ht, 1000, 0.99, {});
            cs += es.ci_low <= ps && ps <= es.ci_high;
            ct += et.ci_low <= pt && pt <= et.ci_high;
        }
        worst = std::min({worst, cs, ct});
    }
    note = " min_coverage=" + std::to_string(worst) + "/100";
    return worst >= 95;
}

Outcome determinism() {
    Outcome o;
    o.require(replays(R"({"suite": "check", "family": [{"rademacher": 2}, {"delta": [1, 0]}, {"rademacher": 2}]})", 1, 1),
              "exact check replay");
    o.require(replays(R"({"suite": "min-c", "mode": "MONTE_CARLO", "trials": 50000, "seed": 11, "corpus": "theorem"})",
                      1, 8),
              "MC survey replay across workers");
    o.require(replays(R"({"suite": "check", "mode": "MONTE_CARLO", "trials": 30000, "seed": 12,
                          "checks": ["first_ineq", "theorem_main"], "lambda": [0.5, 1, 2, 3],
                          "family": [{"uniform": [-1, 1]}, {"rademacher": 1}]})",
                      4, 1),
              "MC continuous replay across workers");
    o.require(replays(R"({"suite": "riemann", "trials": 2000, "seed": 13, "integrand": {"power": {"alpha": -0.25}},
                          "riemann": {"n_max": 64, "trials_per_n": 64, "trajectories": 20,
                                      "schedule": [16, 64, 256], "tail_from": 64}})",
                      2, 5),
              "riemann replay across workers");
    o.require(replays(R"({"suite": "counterexample", "n": [2, 3, 4]})", 1, 3), "counterexample replay");
    std::string note;
    o.require(calibration(note), "calibration");
    o.detail << note;
    return o;
}

Outcome scalar_steps() {
    Outcome o;
    const auto u = ineq::check_scalar_union_bound();
    o.require(u.pass, "union bound fails, margin " + fmt(u.margin));
    std::size_t failed = 0, checked = 0;
    for (const auto& d : corpus::distribution_corpus()) {
        if (!nonzero_law(d)) continue;
        for (NormKind k : kNorms) {
            failed += !ineq::check_paley_zygmund_grid(d, k).pass;
            ++checked;
        }
    }
    o.require(failed == 0, std::to_string(failed) + " Paley-Zygmund failures");
    o.detail << " union_points=" << fmt(value(u.values, "checked")) << " pz_laws=" << checked;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{
        symmetrization_bounds, comp_moment_suite, median_suite, first_ineq_suite, theorem,
        counterexample,        riemann_lab,       cover_identity, determinism,    scalar_steps};
    int first = 1, last = 10;
    if (argc > 1) first = last = std::atoi(argv[1]);
    if (first < 1 || last > 10) {
        std::fprintf(stderr, "usage: acceptance [1..10]\n");
        return 2;
    }
    bool all = true;
    for (int i = first; i <= last; ++i) {
        Outcome o;
        try {
            o = criteria[i - 1]();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s%s\n", i, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
