#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tailgate/corpus.hpp"
#include "tailgate/exact.hpp"

using namespace tailgate;
using namespace tailgate::exact;

namespace {

FiniteDistribution dist(std::initializer_list<std::pair<double, double>> atoms) {
    std::vector<Atom> out;
    for (auto [x, p] : atoms) out.push_back({Vector{x}, p});
    return FiniteDistribution(std::move(out));
}

FiniteDistribution delta(double x) { return FiniteDistribution::point_mass(Vector{x}); }

const FiniteDistribution kRad = FiniteDistribution::rademacher();
const FiniteDistribution kRad2 = dist({{-2, 0.25}, {0, 0.5}, {2, 0.25}});

void expect_same_law(const FiniteDistribution& a, const FiniteDistribution& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.atoms()[i].point, b.atoms()[i].point);
        EXPECT_NEAR(a.atoms()[i].prob, b.atoms()[i].prob, tol);
    }
}

}  // namespace

TEST(Convolve, Examples) {
    EXPECT_EQ(convolve(delta(2), delta(-5)), delta(-3));
    EXPECT_EQ(convolve(kRad, kRad), kRad2);
    const auto d = dist({{-1, 0.2}, {0.5, 0.3}, {7, 0.5}});
    EXPECT_EQ(convolve(d, delta(0)), d);
}

TEST(Convolve, MatchesEnumerationOracle) {
    const auto corpus = corpus::distribution_corpus();
    for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
        if (corpus[i].dim() != corpus[i + 1].dim()) continue;
        const auto got = oracle::law_of(convolve(corpus[i], corpus[i + 1]));
        const auto ref = oracle::sum_law({corpus[i], corpus[i + 1]});
        ASSERT_EQ(got.size(), ref.size());
        for (const auto& [x, p] : ref) EXPECT_NEAR(got.at(x), p, 1e-15);
    }
}

TEST(Convolve, CommutativeAndAssociative) {
    const auto c = corpus::distribution_corpus();
    for (std::size_t i = 0; i + 8 < c.size(); i += 3) {
        const auto& a = c[i];
        const auto& b = c[i + 3];
        const auto& d = c[i + 6];
        EXPECT_EQ(convolve(a, b), convolve(b, a));
        expect_same_law(convolve(convolve(a, b), d), convolve(a, convolve(b, d)), 1e-15);
    }
}

TEST(Convolve, SupportOverflow) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 1001; ++i) atoms.push_back({Vector{static_cast<double>(i)}, 1.0 / 1001});
    const FiniteDistribution big(std::move(atoms));
    try {
        (void)convolve(big, big);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SupportOverflow);
    }
    EXPECT_THROW((void)convolve(kRad, kRad, 3), Error);
    EXPECT_NO_THROW((void)convolve(kRad, kRad, 4));
}

TEST(Convolve, DimensionMismatch) {
    try {
        (void)convolve(kRad, FiniteDistribution::rademacher(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
    }
}

TEST(SumFamily, Examples) {
    EXPECT_EQ(sum_family(ComponentFamily(std::vector<FiniteDistribution>{delta(1), delta(-1)})).law, delta(0));
    for (std::size_t n : {2u, 3u, 5u})
        EXPECT_EQ(sum_family(corpus::converse_family(n)).law, kRad);
    const auto s = sum_family(ComponentFamily(std::vector<FiniteDistribution>{kRad, kRad}));
    EXPECT_EQ(s.law, kRad2);
    EXPECT_EQ(s.provenance, Provenance::IndependentFamily);
    EXPECT_EQ(s.n, 2u);
}

TEST(SumFamily, MatchesEnumerationOracle) {
    for (const auto& fam : corpus::family_corpus()) {
        const auto got = oracle::law_of(sum_family(fam).law);
        const auto ref = oracle::sum_law(fam.finite_components());
        ASSERT_EQ(got.size(), ref.size());
        for (const auto& [x, p] : ref) EXPECT_NEAR(got.at(x), p, 1e-14);
    }
}

TEST(IidSum, Examples) {
    EXPECT_EQ(iid_sum(kRad, 2).law, kRad2);
    const auto d = dist({{-1, 0.2}, {0.5, 0.3}, {7, 0.5}});
    EXPECT_EQ(iid_sum(d, 1).law, d);
    const auto cover = dist({{1, 1.0 / 6}, {-1, 1.0 / 6}, {0, 2.0 / 3}});
    const auto s3 = iid_sum(cover, 3);
    EXPECT_NEAR(s3.law.prob_of(Vector{3.0}), 1.0 / 216, 1e-17);
    EXPECT_EQ(s3.provenance, Provenance::IidPower);
}

// Binary exponentiation against the plain fold: identical support, and
// probabilities equal up to the rounding of a different multiplication order.
TEST(IidSum, EqualsLinearFold) {
    const auto c = corpus::distribution_corpus();
    for (std::size_t i = 0; i < 60; ++i) {
        for (std::size_t n = 1; n <= 6; ++n) {
            if (c[i].size() > 4 && n > 4) continue;
            const auto fast = iid_sum(c[i], n).law;
            const auto slow = iid_sum_linear(c[i], n).law;
            expect_same_law(fast, slow, 1e-14);
        }
    }
}

TEST(IidSum, MatchesEnumerationOracle) {
    const auto c = corpus::distribution_corpus();
    for (std::size_t i = 0; i < 30; ++i) {
        const auto got = oracle::law_of(iid_sum(c[i], 3).law);
        const auto ref = oracle::sum_law({c[i], c[i], c[i]});
        ASSERT_EQ(got.size(), ref.size());
        for (const auto& [x, p] : ref) EXPECT_NEAR(got.at(x), p, 1e-14);
    }
}

TEST(Tail, Examples) {
    EXPECT_EQ(tail(kRad2, 2.0, NormKind::L2), 0.5);
    EXPECT_EQ(tail(kRad2, 0.0, NormKind::L2), 1.0);
    EXPECT_EQ(tail(delta(0), 0.1, NormKind::L2), 0.0);
}

TEST(Tail, NonincreasingAndIncludesBoundary) {
    for (const auto& d : corpus::distribution_corpus()) {
        const auto norms = support_norms(d, NormKind::L2);
        double prev = 1.0;
        for (double r : norms) {
            const double at = tail(d, r, NormKind::L2);
            EXPECT_LE(at, prev + 1e-15);
            EXPECT_GT(at, tail(d, std::nextafter(r, 1e9), NormKind::L2));
            prev = at;
        }
    }
}

TEST(Moments, Examples) {
    EXPECT_EQ(moment2(kRad, NormKind::L2), 1.0);
    EXPECT_EQ(mean(kRad), Vector{0.0});
    const auto d = FiniteDistribution::point_mass(Vector{3.0, 4.0});
    EXPECT_EQ(moment2(d, NormKind::L2), 25.0);
    EXPECT_EQ(mean(d), (Vector{3.0, 4.0}));
    EXPECT_EQ(moment2(kRad2, NormKind::L2), 2.0);
}

TEST(Moments, VarianceAdditivityForCenteredLaws) {
    for (const auto& d : corpus::distribution_corpus()) {
        if (d.dim() != 1) continue;
        const auto c = affine(d, 1.0, -mean(d));
        for (std::size_t n : {2u, 3u}) {
            const double m = moment2(c, NormKind::L2);
            EXPECT_NEAR(moment2(iid_sum(c, n).law, NormKind::L2), n * m, 1e-12 * (1 + n * m));
        }
    }
}

TEST(Moments, MeanOfSumIsSumOfMeans) {
    for (const auto& fam : corpus::family_corpus()) {
        Vector m = Vector::zero(fam.dim());
        for (const auto& c : fam.finite_components()) m += mean(c);
        const Vector s = mean(sum_family(fam).law);
        const Vector st = mean(iid_sum(regular_cover(fam), fam.size()).law);
        for (std::size_t j = 0; j < fam.dim(); ++j) {
            EXPECT_NEAR(s[j], m[j], 1e-12);
            EXPECT_NEAR(s[j], st[j], 1e-9);
        }
    }
}

TEST(Median, Examples) {
    EXPECT_EQ(median_norm(kRad, NormKind::L2).value, 1.0);
    EXPECT_EQ(median_norm(iid_sum(kRad, 3).law, NormKind::L2).value, 1.0);
    EXPECT_EQ(median_norm(delta(0), NormKind::L2).value, 0.0);
    EXPECT_EQ(median_norm(kRad2, NormKind::L2).value, 0.0);
    EXPECT_EQ(median_norm(kRad, NormKind::L2).convention, "LOWER_MEDIAN");
}

TEST(Median, SatisfiesBothDefiningInequalities) {
    for (const auto& fam : corpus::family_corpus()) {
        const auto s = sum_family(fam).law;
        for (NormKind k : {NormKind::L1, NormKind::L2, NormKind::LInf}) {
            const double m = median_norm(s, k).value;
            double below = 0, above = 0;
            for (const auto& a : s.atoms()) {
                if (norm(a.point, k) <= m) below += a.prob;
                if (norm(a.point, k) >= m) above += a.prob;
            }
            EXPECT_GE(below, 0.5 - 1e-12);
            EXPECT_GE(above, 0.5 - 1e-12);
        }
    }
}
