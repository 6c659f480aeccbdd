#include "tailgate/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>

namespace tailgate {

Interval clopper_pearson(std::uint64_t hits, std::uint64_t trials, double level) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "confidence interval needs trials >= 1");
    if (hits > trials) throw Error(ErrorCode::InvalidArgument, "hits exceed trials");
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidArgument, "level must lie in (0,1)");
    const double alpha = 1.0 - level;
    const auto k = static_cast<double>(hits);
    const auto n = static_cast<double>(trials);
    Interval ci{0.0, 1.0};
    if (hits > 0) ci.low = boost::math::quantile(boost::math::beta_distribution<double>(k, n - k + 1.0), alpha / 2.0);
    if (hits < trials)
        ci.high = boost::math::quantile(boost::math::beta_distribution<double>(k + 1.0, n - k), 1.0 - alpha / 2.0);
    const double p_hat = k / n;
    ci.low = std::min(ci.low, p_hat);
    ci.high = std::max(ci.high, p_hat);
    return ci;
}

void RunningStats::push(double x) noexcept {
    if (n_ == 0) {
        min_ = max_ = x;
    } else {
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    const auto na = static_cast<double>(n_);
    const auto nb = static_cast<double>(other.n_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ = (na * mean_ + nb * other.mean_) / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    n_ += other.n_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

double RunningStats::std_error() const noexcept {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

void MomentAccumulator::push(const Vector& x) {
    require_same_dim(mean_, x);
    const double r = norm(x, norm_kind_);
    norm_.push(r);
    sq_norm_.push(r * r);
    const auto n = static_cast<double>(norm_.count());
    Vector m = mean_;
    for (std::size_t i = 0; i < x.dim(); ++i) m.set(i, mean_[i] + (x[i] - mean_[i]) / n);
    mean_ = m;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.count() == 0) return;
    if (count() == 0) {
        *this = other;
        return;
    }
    require_same_dim(mean_, other.mean_);
    const auto na = static_cast<double>(count());
    const auto nb = static_cast<double>(other.count());
    for (std::size_t i = 0; i < mean_.dim(); ++i) mean_.set(i, (na * mean_[i] + nb * other.mean_[i]) / (na + nb));
    norm_.merge(other.norm_);
    sq_norm_.merge(other.sq_norm_);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "KS distance needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == t) ++i;
        while (j < b.size() && b[j] == t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_against_law(std::vector<double> sample, const FiniteDistribution& law1d) {
    if (law1d.dim() != 1) throw Error(ErrorCode::DimMismatch, "KS comparison needs a one-dimensional law");
    if (sample.empty()) throw Error(ErrorCode::InvalidArgument, "KS distance needs a non-empty sample");
    std::sort(sample.begin(), sample.end());
    std::vector<double> ts(sample);
    for (const auto& a : law1d.atoms()) ts.push_back(a.point[0]);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    const auto n = static_cast<double>(sample.size());
    const auto atoms = law1d.atoms();
    std::size_t si = 0, ai = 0;
    double cdf = 0.0, d = 0.0;
    for (double t : ts) {
        // Left limits at t.
        d = std::max(d, std::abs(static_cast<double>(si) / n - cdf));
        while (si < sample.size() && sample[si] <= t) ++si;
        while (ai < atoms.size() && atoms[ai].point[0] <= t) cdf += atoms[ai++].prob;
        d = std::max(d, std::abs(static_cast<double>(si) / n - cdf));
    }
    return d;
}

double dot(const Vector& a, const Vector& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

FiniteDistribution project(const FiniteDistribution& d, const Vector& direction) {
    std::vector<Atom> atoms;
    atoms.reserve(d.size());
    for (const auto& a : d.atoms()) atoms.push_back({Vector{dot(a.point, direction)}, a.prob});
    return FiniteDistribution(std::move(atoms));
}

}  // namespace tailgate
