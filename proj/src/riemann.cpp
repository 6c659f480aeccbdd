#include "tailgate/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "tailgate/error.hpp"
#include "tailgate/numerics.hpp"
#include "tailgate/parallel.hpp"

namespace tailgate::riemann {

namespace {

void require_n(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "need n >= 1");
}

// Uniform point of [lo, hi) that f can be evaluated at.
double draw_point(const IntegrandSpec& f, double lo, double hi, Stream& rng) {
    for (;;) {
        const double x = lo + (hi - lo) * rng.uniform();
        if (!f.is_exceptional(x)) return x;
    }
}

// f0 + sum_k (v_k - f0) / n: exact when every v_k equals f0.
class MeanOfValues {
public:
    void add(double v) {
        if (!started_) {
            first_ = v;
            started_ = true;
        }
        rest_.add(v - first_);
    }
    double value(std::size_t n) const { return first_ + rest_.value() / static_cast<double>(n); }

private:
    bool started_ = false;
    double first_ = 0.0;
    ExactSum rest_;
};

double cell_point(const IntegrandSpec& f, std::size_t n, std::size_t k, Stream& rng) {
    const auto dn = static_cast<double>(n);
    const double lo = static_cast<double>(k) / dn;
    const double hi = static_cast<double>(k + 1) / dn;
    const double x = draw_point(f, lo, hi, rng);
    if (!(x >= lo && x <= hi))
        throw Error(ErrorCode::Internal, "sample point " + std::to_string(x) + " left cell " + std::to_string(k + 1));
    return x;
}

template <class Draw>
std::vector<double> collect(std::uint64_t draws, SeedSpec seed, unsigned workers, Draw&& draw) {
    const auto parts = mc::run_blocks(draws, seed, workers, [&](Stream& rng, std::uint64_t count) {
        std::vector<double> out;
        out.reserve(count);
        for (std::uint64_t t = 0; t < count; ++t) out.push_back(draw(rng));
        return out;
    });
    std::vector<double> all;
    all.reserve(draws);
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

}  // namespace

RiemannDraw riemann_sample(const IntegrandSpec& f, std::size_t n, Stream& rng) {
    require_n(n);
    RiemannDraw d;
    d.n = n;
    d.points.reserve(n);
    MeanOfValues m;
    for (std::size_t k = 0; k < n; ++k) {
        d.points.push_back(cell_point(f, n, k, rng));
        m.add(f(d.points.back()));
    }
    d.value = m.value(n);
    return d;
}

RiemannDraw riemann_sample(const IntegrandSpec& f, std::size_t n, SeedSpec seed) {
    Stream rng(seed);
    return riemann_sample(f, n, rng);
}

double riemann_value(const IntegrandSpec& f, std::size_t n, Stream& rng) {
    require_n(n);
    MeanOfValues m;
    for (std::size_t k = 0; k < n; ++k) m.add(f(cell_point(f, n, k, rng)));
    return m.value(n);
}

double plain_mc_value(const IntegrandSpec& f, std::size_t n, Stream& rng) {
    require_n(n);
    MeanOfValues m;
    for (std::size_t i = 0; i < n; ++i) m.add(uniform_value(f, rng));
    return m.value(n);
}

double plain_mc_sample(const IntegrandSpec& f, std::size_t n, SeedSpec seed) {
    Stream rng(seed);
    return plain_mc_value(f, n, rng);
}

double stratified_summand(const IntegrandSpec& f, std::size_t n, Stream& rng) {
    require_n(n);
    const auto k = static_cast<std::size_t>(rng.index(n));
    return f(cell_point(f, n, k, rng));
}

double uniform_value(const IntegrandSpec& f, Stream& rng) { return f(draw_point(f, 0.0, 1.0, rng)); }

SampleSummary summarize(const std::vector<double>& xs) {
    SampleSummary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    const auto n = static_cast<double>(xs.size());
    ExactSum sum;
    for (double x : xs) sum.add(x);
    s.mean = sum.value() / n;
    if (xs.size() < 2) return s;
    ExactSum m2, m4;
    for (double x : xs) {
        const double d2 = (x - s.mean) * (x - s.mean);
        m2.add(d2);
        m4.add(d2 * d2);
    }
    s.variance = m2.value() / (n - 1.0);
    s.mean_se = std::sqrt(s.variance / n);
    const double mu2 = m2.value() / n;
    const double mu4 = m4.value() / n;
    s.variance_se = std::sqrt(std::max(0.0, (mu4 - mu2 * mu2) / n + 2.0 * mu2 * mu2 / (n * (n - 1.0))));
    return s;
}

std::vector<double> riemann_values(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed,
                                   unsigned workers) {
    require_n(n);
    return collect(draws, seed, workers, [&](Stream& rng) { return riemann_value(f, n, rng); });
}

std::vector<double> plain_values(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed,
                                 unsigned workers) {
    require_n(n);
    return collect(draws, seed, workers, [&](Stream& rng) { return plain_mc_value(f, n, rng); });
}

VarianceStudy variance_study(const IntegrandSpec& f, std::size_t n, std::uint64_t draws, SeedSpec seed, double level,
                             unsigned workers) {
    if (draws < 2) throw Error(ErrorCode::InvalidArgument, "variance study needs draws >= 2");
    VarianceStudy v;
    v.n = n;
    v.stratified = summarize(riemann_values(f, n, draws, seed.child(0), workers));
    v.plain = summarize(plain_values(f, n, draws, seed.child(1), workers));
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
    v.separated = v.stratified.variance + z * v.stratified.variance_se < v.plain.variance - z * v.plain.variance_se;
    return v;
}

TailSumReport tail_sum_diagnostic(const IntegrandSpec& f, double eps, std::size_t n_max, std::uint64_t trials_per_n,
                                  SeedSpec seed, double level, unsigned workers) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (n_max == 0 || n_max > kMaxTailSumN)
        throw Error(ErrorCode::InvalidArgument, "n_max must lie in 1..16384");
    if (trials_per_n == 0) throw Error(ErrorCode::InvalidArgument, "need trials_per_n >= 1");
    const double A = f.exact_integral();

    const auto hits = run_ordered(n_max, workers, [&](std::size_t i) {
        const std::size_t n = i + 1;
        Stream rng(seed.child(n));
        std::uint64_t h = 0;
        for (std::uint64_t t = 0; t < trials_per_n; ++t)
            if (std::abs(riemann_value(f, n, rng) - A) >= eps) ++h;
        return h;
    });

    TailSumReport r;
    r.epsilon = eps;
    r.integral = A;
    double sum = 0.0, upper = 0.0;
    for (std::size_t i = 0; i < n_max; ++i) {
        TailSumRow row;
        row.n = i + 1;
        row.tail = mc::make_tail_estimate(hits[i], trials_per_n, level, seed.child(row.n));
        sum += row.tail.p_hat;
        upper += row.tail.ci_high;
        row.partial_sum = sum;
        row.partial_sum_upper = upper;
        r.rows.push_back(row);
    }
    const double u_end = r.rows.back().partial_sum_upper;
    const std::size_t q = (3 * n_max) / 4;
    const double u_q = q > 0 ? r.rows[q - 1].partial_sum_upper : 0.0;
    r.stabilization = u_end > 0.0 ? (u_end - u_q) / u_end : 0.0;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (const auto& row : r.rows) {
        if (row.tail.hits == 0) continue;
        const double x = std::log(static_cast<double>(row.n)), y = std::log(row.tail.p_hat);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1;
    }
    if (m >= 2 && m * sxx - sx * sx > 0) r.decay_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return r;
}

ConvergenceReport convergence_experiment(const IntegrandSpec& f, const std::vector<std::size_t>& schedule,
                                         std::size_t trajectories, std::size_t tail_from, double eps, SeedSpec seed,
                                         unsigned workers) {
    if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i)
        if (schedule[i] == 0 || (i > 0 && schedule[i] <= schedule[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "schedule must be strictly increasing and positive");
    if (trajectories == 0) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (tail_from > schedule.back()) throw Error(ErrorCode::InvalidArgument, "tail start lies beyond the schedule");

    ConvergenceReport r;
    r.schedule = schedule;
    r.tail_from = tail_from;
    r.epsilon = eps;
    r.integral = f.exact_integral();
    r.max_tail_deviation = run_ordered(trajectories, workers, [&](std::size_t j) {
        Stream rng(seed.child(j));
        double worst = 0.0;
        for (std::size_t n : schedule) {
            const double dev = std::abs(riemann_value(f, n, rng) - r.integral);
            if (n >= tail_from) worst = std::max(worst, dev);
        }
        return worst;
    });
    const auto within = std::count_if(r.max_tail_deviation.begin(), r.max_tail_deviation.end(),
                                      [&](double d) { return d < eps; });
    r.fraction_within = static_cast<double>(within) / static_cast<double>(trajectories);
    return r;
}

}  // namespace tailgate::riemann
