#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "tailgate/corpus.hpp"
#include "tailgate/exact.hpp"
#include "tailgate/mc.hpp"

using namespace tailgate;
using namespace tailgate::mc;

namespace {

const FiniteDistribution kRad = FiniteDistribution::rademacher();

bool contains(const TailEstimate& t, double p) { return t.ci_low <= p && p <= t.ci_high; }

// Empirical law of a one-dimensional sample against an exact projection.
double ks_projection(const std::vector<Vector>& xs, const FiniteDistribution& law, const Vector& dir) {
    std::vector<double> proj;
    proj.reserve(xs.size());
    for (const auto& x : xs) proj.push_back(dot(x, dir));
    return ks_against_law(std::move(proj), project(law, dir));
}

std::vector<Vector> directions(std::size_t dim) {
    std::vector<Vector> out;
    for (std::size_t j = 0; j < dim; ++j) {
        Vector e = Vector::zero(dim);
        e.set(j, 1.0);
        out.push_back(e);
    }
    if (dim == 2) out.push_back(Vector{1.0, -1.0});
    return out;
}

}  // namespace

TEST(SampleCover, SingleComponentLaw) {
    const FiniteDistribution d({{Vector{-1.0}, 0.2}, {Vector{0.5}, 0.3}, {Vector{4.0}, 0.5}});
    const ComponentFamily fam(std::vector<FiniteDistribution>{d});
    std::vector<double> xs;
    for (std::uint64_t i = 0; i < 100000; ++i) xs.push_back(sample_cover(fam, SeedSpec{1, i})[0]);
    EXPECT_LE(ks_against_law(xs, d), 0.01);
}

TEST(SampleCover, ConverseFamilyMassAtOne) {
    const auto fam = corpus::converse_family(3);
    const FamilySampler sampler(fam);
    // A norm tail at 1 would also count Y = -1; Y = 1 is the event |Y + 1| >= 2.
    const Sampler shifted = [&](Stream& rng) { return sampler.draw_cover(rng) + Vector{1.0}; };
    const auto t = estimate_tail(shifted, 2.0, NormKind::L2, 100000, SeedSpec{2, 0});
    EXPECT_TRUE(contains(t, 1.0 / 6.0)) << t.ci_low << " " << t.ci_high;
}

TEST(SampleCover, BitIdenticalOnRepeat) {
    const auto fam = corpus::theorem_corpus()[5];
    for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(sample_cover(fam, SeedSpec{3, i}), sample_cover(fam, SeedSpec{3, i}));
}

TEST(ArrayCoupling, SingleComponent) {
    const FiniteDistribution d({{Vector{-1.0}, 0.4}, {Vector{2.0}, 0.6}});
    const ComponentFamily fam(std::vector<FiniteDistribution>{d});
    for (std::uint64_t i = 0; i < 1000; ++i) {
        const auto c = array_coupling(fam, SeedSpec{4, i});
        EXPECT_EQ(c.indices, std::vector<std::size_t>{0});
        EXPECT_EQ(c.s, c.s_tilde);
    }
}

TEST(ArrayCoupling, ConverseFamilySumHasUnitNorm) {
    const auto fam = corpus::converse_family(3);
    for (std::uint64_t i = 0; i < 10000; ++i) EXPECT_EQ(norm(array_coupling(fam, SeedSpec{5, i}).s, NormKind::L2), 1.0);
}

TEST(ArrayCoupling, CoverSumMeanMatchesExact) {
    for (std::size_t idx : {3u, 10u, 20u}) {
        const auto fam = corpus::theorem_corpus()[idx];
        const FamilySampler sampler(fam);
        const Sampler draw = [&](Stream& rng) { return array_coupling(sampler, rng).s_tilde; };
        const auto acc = estimate_moments(draw, NormKind::L2, fam.dim(), 100000, SeedSpec{6, idx});
        const Vector exact_mean = mean(exact::iid_sum(regular_cover(fam), fam.size()).law);
        const double sd = std::sqrt(exact::moment2(exact::iid_sum(regular_cover(fam), fam.size()).law, NormKind::L2));
        for (std::size_t j = 0; j < fam.dim(); ++j)
            EXPECT_NEAR(acc.mean()[j], exact_mean[j], 4.0 * sd / std::sqrt(100000.0));
    }
}

TEST(ArrayCoupling, LiteralInvariants) {
    const auto fam = corpus::theorem_corpus()[7];
    const std::size_t n = fam.size();
    CouplingOptions opt;
    opt.literal = true;
    opt.truncation = 1.5;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const auto c = array_coupling(fam, SeedSpec{7, i}, opt);
        ASSERT_EQ(c.x.size(), n * n);
        Vector s = Vector::zero(fam.dim()), st = Vector::zero(fam.dim()), stp = Vector::zero(fam.dim());
        Vector t = Vector::zero(fam.dim());
        double s_star = 0, x_star = 0;
        for (std::size_t k = 0; k < n; ++k) {
            s += c.x[k];
            if (norm(c.x[k], NormKind::L2) < 1.5) t += c.x[k];
            st += c.x[k * n + c.indices[k]];
            stp += c.x_prime[k * n + c.indices[k]];
            s_star = std::max(s_star, norm(st, NormKind::L2));
            x_star = std::max(x_star, norm(c.x[k * n + c.indices[k]], NormKind::L2));
        }
        EXPECT_EQ(c.s, s);
        EXPECT_EQ(c.t, t);
        EXPECT_EQ(c.s_tilde, st);
        EXPECT_EQ(c.s_tilde_prime, stp);
        EXPECT_EQ(c.s_star, s_star);
        EXPECT_EQ(c.x_star, x_star);
    }
}

// Marginals of both sums against the exact laws, on every corpus instance.
TEST(ArrayCoupling, MarginalsMatchExactLaws) {
    const auto corpus = corpus::theorem_corpus();
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& fam = corpus[idx];
        const auto sum = exact::sum_family(fam).law;
        const auto cover_sum = exact::iid_sum(regular_cover(fam), fam.size()).law;
        const FamilySampler sampler(fam);
        std::vector<Vector> s, st;
        auto parts = run_blocks(100000, SeedSpec{8, idx}, 4, [&](Stream& rng, std::uint64_t count) {
            std::vector<std::pair<Vector, Vector>> out;
            for (std::uint64_t t = 0; t < count; ++t) {
                const auto c = array_coupling(sampler, rng);
                out.emplace_back(c.s, c.s_tilde);
            }
            return out;
        });
        for (const auto& p : parts)
            for (const auto& [a, b] : p) {
                s.push_back(a);
                st.push_back(b);
            }
        for (const auto& dir : directions(fam.dim())) {
            EXPECT_LE(ks_projection(st, cover_sum, dir), 0.02) << "instance " << idx;
            EXPECT_LE(ks_projection(s, sum, dir), 0.02) << "instance " << idx;
        }
    }
}

// The optimised path against the literal n x n construction, n <= 4.
TEST(ArrayCoupling, OptimisedMatchesLiteralInDistribution) {
    const auto corpus = corpus::theorem_corpus();
    int checked = 0;
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& fam = corpus[idx];
        if (fam.size() > 4) continue;
        ++checked;
        const FamilySampler sampler(fam);
        CouplingOptions lit;
        lit.literal = true;
        std::vector<double> a_st, b_st, a_s, b_s, a_star, b_star;
        Stream ra(SeedSpec{9, idx}), rb(SeedSpec{10, idx});
        for (int t = 0; t < 50000; ++t) {
            const auto x = array_coupling(sampler, ra, lit);
            const auto y = array_coupling(sampler, rb);
            a_st.push_back(norm(x.s_tilde, NormKind::L2));
            b_st.push_back(norm(y.s_tilde, NormKind::L2));
            a_s.push_back(norm(x.s, NormKind::L2));
            b_s.push_back(norm(y.s, NormKind::L2));
            a_star.push_back(x.s_star);
            b_star.push_back(y.s_star);
        }
        // 99.9% two-sample critical value at m = n = 5e4 is about 0.0123.
        EXPECT_LE(ks_two_sample(a_st, b_st), 0.0123) << idx;
        EXPECT_LE(ks_two_sample(a_s, b_s), 0.0123) << idx;
        EXPECT_LE(ks_two_sample(a_star, b_star), 0.0123) << idx;
    }
    EXPECT_GE(checked, 10);
}

TEST(CoupledSymmetrizedSum, ConstantsCancel) {
    const ComponentFamily fam(std::vector<FiniteDistribution>{FiniteDistribution::point_mass(Vector{2.0, -1.0}),
                                          FiniteDistribution::point_mass(Vector{0.5, 3.0})});
    for (std::uint64_t i = 0; i < 100; ++i)
        EXPECT_EQ(coupled_symmetrized_sum(fam, SeedSpec{11, i}).difference, Vector::zero(2));
}

TEST(CoupledSymmetrizedSum, RademacherLawAndIdentity) {
    const ComponentFamily fam(std::vector<FiniteDistribution>{kRad});
    std::vector<double> third;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const auto t = coupled_symmetrized_sum(fam, SeedSpec{12, i});
        EXPECT_EQ(t.difference, t.s - t.s_prime);
        third.push_back(t.difference[0]);
    }
    EXPECT_LE(ks_against_law(third, symmetrize(kRad)), 0.01);
}

TEST(CoupledSymmetrizedSum, PointwiseIdentityOnFamilies) {
    for (const auto& fam : corpus::family_corpus()) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            const auto t = coupled_symmetrized_sum(fam, SeedSpec{13, i});
            EXPECT_EQ(t.difference, t.s - t.s_prime);
            for (std::size_t j = 0; j < fam.dim(); ++j)
                EXPECT_NEAR(t.sum_of_symmetrized[j], t.difference[j], 1e-12);
        }
    }
}

TEST(EstimateTail, RademacherPair) {
    const Sampler pair = [](Stream& rng) {
        return Vector{(rng.index(2) ? 1.0 : -1.0) + (rng.index(2) ? 1.0 : -1.0)};
    };
    const auto t = estimate_tail(pair, 2.0, NormKind::L2, 100000, SeedSpec{14, 0});
    EXPECT_TRUE(contains(t, 0.5));
    const auto z = estimate_tail(pair, 0.0, NormKind::L2, 1000, SeedSpec{14, 1});
    EXPECT_EQ(z.hits, z.trials);
    EXPECT_EQ(z.p_hat, 1.0);
}

TEST(EstimateTail, ZeroHitsUpperBound) {
    const Sampler zero = [](Stream&) { return Vector{0.0}; };
    const auto t = estimate_tail(zero, 1.0, NormKind::L2, 100, SeedSpec{15, 0});
    EXPECT_EQ(t.hits, 0u);
    EXPECT_NEAR(t.ci_high, 1.0 - std::pow(0.005, 0.01), 1e-12);
    EXPECT_GT(t.ci_high, 0.0);
}

TEST(EstimateTail, RejectsZeroTrials) {
    const Sampler zero = [](Stream&) { return Vector{0.0}; };
    EXPECT_THROW(estimate_tail(zero, 1.0, NormKind::L2, 0, SeedSpec{}), Error);
}

TEST(EstimateMoments, Examples) {
    const FamilySampler rad(ComponentFamily(std::vector<FiniteDistribution>{kRad}));
    const Sampler r = [&](Stream& rng) { return rad.draw(0, rng); };
    const auto acc = estimate_moments(r, NormKind::L2, 1, 100000, SeedSpec{16, 0});
    EXPECT_NEAR(acc.sum_sq_norm() / acc.count(), 1.0, 1e-12);
    const Sampler c = [](Stream&) { return Vector{3.0, 4.0}; };
    const auto cc = estimate_moments(c, NormKind::L2, 2, 100, SeedSpec{16, 1});
    EXPECT_EQ(cc.max_norm(), 5.0);
    EXPECT_EQ(cc.mean_norm(), 5.0);
    EXPECT_THROW(estimate_moments(c, NormKind::L2, 2, 1, SeedSpec{}), Error);
}

TEST(EstimateMoments, SecondMomentOracle) {
    const FiniteDistribution d({{Vector{-1.0}, 0.25}, {Vector{0.0}, 0.25}, {Vector{3.0}, 0.5}});
    const FamilySampler s(ComponentFamily(std::vector<FiniteDistribution>{d}));
    const Sampler draw = [&](Stream& rng) { return s.draw(0, rng); };
    const auto acc = estimate_moments(draw, NormKind::L2, 1, 100000, SeedSpec{17, 0});
    const double exact2 = exact::moment2(d, NormKind::L2);
    EXPECT_NEAR(acc.mean_sq_norm(), exact2, 3.0 * acc.sq_norm_stats().std_error());
}

TEST(Determinism, IndependentOfWorkerCount) {
    const auto fam = corpus::theorem_corpus()[12];
    const FamilySampler sampler(fam);
    const Sampler draw = [&](Stream& rng) { return array_coupling(sampler, rng).s_tilde; };
    const auto t1 = estimate_tail(draw, 1.0, NormKind::L2, 50000, SeedSpec{18, 0}, 0.99, 1);
    const auto t4 = estimate_tail(draw, 1.0, NormKind::L2, 50000, SeedSpec{18, 0}, 0.99, 4);
    const auto t7 = estimate_tail(draw, 1.0, NormKind::L2, 50000, SeedSpec{18, 0}, 0.99, 7);
    EXPECT_EQ(t1.hits, t4.hits);
    EXPECT_EQ(t1.hits, t7.hits);
    EXPECT_EQ(sample_norms(draw, NormKind::L1, 30000, SeedSpec{18, 1}, 1),
              sample_norms(draw, NormKind::L1, 30000, SeedSpec{18, 1}, 5));
    const auto m1 = estimate_moments(draw, NormKind::L2, fam.dim(), 30000, SeedSpec{18, 2}, 1);
    const auto m3 = estimate_moments(draw, NormKind::L2, fam.dim(), 30000, SeedSpec{18, 2}, 3);
    EXPECT_EQ(m1.mean_sq_norm(), m3.mean_sq_norm());
    EXPECT_EQ(m1.mean(), m3.mean());
}

// Binomial-consistency meta-test: over 100 master seeds, each 99% interval
// covers the exact tail in at least 95 of them, for every corpus family.
TEST(Calibration, IntervalsCoverExactTails) {
    const auto corpus = corpus::family_corpus();
    for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
        const auto& fam = corpus[idx];
        const auto sum = exact::sum_family(fam).law;
        const auto cover_sum = exact::iid_sum(regular_cover(fam), fam.size()).law;
        const double lambda = std::max(0.5, exact::median_norm(cover_sum, NormKind::L2).value);
        const double p_sum = exact::tail(sum, lambda, NormKind::L2);
        const double p_cover = exact::tail(cover_sum, lambda, NormKind::L2);
        const FamilySampler sampler(fam);
        int cover_s = 0, cover_t = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            std::uint64_t hs = 0, ht = 0;
            Stream rng(SeedSpec{1000 + seed, idx});
            const std::uint64_t trials = 1000;
            for (std::uint64_t t = 0; t < trials; ++t) {
                const auto c = array_coupling(sampler, rng);
                hs += norm(c.s, NormKind::L2) >= lambda;
                ht += norm(c.s_tilde, NormKind::L2) >= lambda;
            }
            cover_s += contains(make_tail_estimate(hs, trials, 0.99, {}), p_sum);
            cover_t += contains(make_tail_estimate(ht, trials, 0.99, {}), p_cover);
        }
        EXPECT_GE(cover_s, 95) << "family " << idx;
        EXPECT_GE(cover_t, 95) << "family " << idx;
    }
}
