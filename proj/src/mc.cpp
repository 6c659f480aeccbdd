#include "tailgate/mc.hpp"

#include <algorithm>

namespace tailgate::mc {

FamilySampler::FamilySampler(const ComponentFamily& fam) : dim_(fam.dim()) {
    tables_.reserve(fam.size());
    for (const auto& c : fam.components()) {
        if (const auto* d = std::get_if<FiniteDistribution>(&c)) {
            FiniteTable t;
            double cum = 0.0;
            for (const auto& a : d->atoms()) {
                cum += a.prob;
                t.points.push_back(a.point);
                t.cumulative.push_back(cum);
            }
            for (double& x : t.cumulative) x /= cum;
            t.cumulative.back() = 1.0;
            tables_.emplace_back(std::move(t));
        } else {
            tables_.emplace_back(std::get<ContinuousSpec>(c));
        }
    }
}

Vector FamilySampler::draw(std::size_t k, Stream& rng) const {
    const auto& table = tables_[k];
    if (const auto* t = std::get_if<FiniteTable>(&table)) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(t->cumulative.begin(), t->cumulative.end(), u);
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - t->cumulative.begin()),
                                               t->points.size() - 1);
        return t->points[idx];
    }
    const auto& spec = std::get<ContinuousSpec>(table);
    if (const auto* u = std::get_if<UniformInterval>(&spec.variant()))
        return Vector{u->a + (u->b - u->a) * rng.uniform()};
    const auto& push = std::get<PushforwardOfUniform>(spec.variant());
    for (;;) {
        const double x = push.a + (push.b - push.a) * rng.uniform();
        if (!push.integrand.is_exceptional(x)) return Vector{push.integrand(x)};
    }
}

Vector FamilySampler::draw_cover(Stream& rng) const {
    return draw(static_cast<std::size_t>(rng.index(tables_.size())), rng);
}

Vector sample_cover(const ComponentFamily& fam, SeedSpec seed) {
    Stream rng(seed);
    return FamilySampler(fam).draw_cover(rng);
}

namespace {

Vector truncated(const Vector& x, const CouplingOptions& opt) {
    if (opt.truncation && !(norm(x, opt.norm) < *opt.truncation)) return Vector::zero(x.dim());
    return x;
}

}  // namespace

CouplingDraw array_coupling(const FamilySampler& sampler, Stream& rng, const CouplingOptions& opt) {
    const std::size_t n = sampler.size();
    const std::size_t dim = sampler.dim();
    CouplingDraw d;
    d.indices.resize(n);
    for (auto& i : d.indices) i = static_cast<std::size_t>(rng.index(n));

    // Row 1 (index 0) feeds S_n and S_n'; entry (i, I_i) feeds the tilde sums.
    std::vector<Vector> row(n), row_prime(n), diag(n), diag_prime(n);
    if (opt.literal) {
        d.x.reserve(n * n);
        d.x_prime.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d.x.push_back(sampler.draw(j, rng));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d.x_prime.push_back(sampler.draw(j, rng));
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = d.x[j];
            row_prime[j] = d.x_prime[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = d.x[i * n + d.indices[i]];
            diag_prime[i] = d.x_prime[i * n + d.indices[i]];
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) row[j] = sampler.draw(j, rng);
        for (std::size_t j = 0; j < n; ++j) row_prime[j] = sampler.draw(j, rng);
        diag[0] = row[d.indices[0]];
        diag_prime[0] = row_prime[d.indices[0]];
        for (std::size_t i = 1; i < n; ++i) {
            diag[i] = sampler.draw(d.indices[i], rng);
            diag_prime[i] = sampler.draw(d.indices[i], rng);
        }
    }

    d.s = d.s_prime = d.s_tilde = d.s_tilde_prime = d.t = d.t_tilde = Vector::zero(dim);
    for (std::size_t k = 0; k < n; ++k) {
        d.s += row[k];
        d.s_prime += row_prime[k];
        d.t += truncated(row[k], opt);
        d.s_tilde += diag[k];
        d.s_tilde_prime += diag_prime[k];
        d.t_tilde += truncated(diag[k], opt);
        d.s_star = std::max(d.s_star, norm(d.s_tilde, opt.norm));
        d.x_star = std::max(d.x_star, norm(diag[k], opt.norm));
    }
    return d;
}

CouplingDraw array_coupling(const ComponentFamily& fam, SeedSpec seed, const CouplingOptions& opt) {
    Stream rng(seed);
    return array_coupling(FamilySampler(fam), rng, opt);
}

SymmetrizedTriple coupled_symmetrized_sum(const FamilySampler& sampler, Stream& rng) {
    const std::size_t dim = sampler.dim();
    SymmetrizedTriple out{Vector::zero(dim), Vector::zero(dim), Vector::zero(dim), Vector::zero(dim)};
    for (std::size_t k = 0; k < sampler.size(); ++k) {
        const Vector x = sampler.draw(k, rng);
        const Vector x_prime = sampler.draw(k, rng);
        out.s += x;
        out.s_prime += x_prime;
        out.sum_of_symmetrized += x - x_prime;
    }
    out.difference = out.s - out.s_prime;
    return out;
}

SymmetrizedTriple coupled_symmetrized_sum(const ComponentFamily& fam, SeedSpec seed) {
    Stream rng(seed);
    return coupled_symmetrized_sum(FamilySampler(fam), rng);
}

TailEstimate make_tail_estimate(std::uint64_t hits, std::uint64_t trials, double level, SeedSpec seed) {
    const Interval ci = clopper_pearson(hits, trials, level);
    return {hits, trials, static_cast<double>(hits) / static_cast<double>(trials), ci.low, ci.high, level, seed};
}

TailEstimate tail_from_sorted(const std::vector<double>& sorted_norms, double lambda, double level, SeedSpec seed) {
    const auto it = std::lower_bound(sorted_norms.begin(), sorted_norms.end(), lambda);
    const auto hits = static_cast<std::uint64_t>(sorted_norms.end() - it);
    return make_tail_estimate(hits, sorted_norms.size(), level, seed);
}

TailEstimate estimate_tail(const Sampler& sampler, double lambda, NormKind k, std::uint64_t trials, SeedSpec seed,
                           double level, unsigned workers) {
    if (trials == 0) throw Error(ErrorCode::InvalidArgument, "estimate_tail needs trials >= 1");
    const auto partial = run_blocks(trials, seed, workers, [&](Stream& rng, std::uint64_t count) {
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < count; ++t)
            if (norm(sampler(rng), k) >= lambda) ++hits;
        return hits;
    });
    std::uint64_t hits = 0;
    for (auto h : partial) hits += h;
    return make_tail_estimate(hits, trials, level, seed);
}

std::vector<double> sample_norms(const Sampler& sampler, NormKind k, std::uint64_t trials, SeedSpec seed,
                                 unsigned workers) {
    const auto partial = run_blocks(trials, seed, workers, [&](Stream& rng, std::uint64_t count) {
        std::vector<double> out;
        out.reserve(count);
        for (std::uint64_t t = 0; t < count; ++t) out.push_back(norm(sampler(rng), k));
        return out;
    });
    std::vector<double> all;
    all.reserve(trials);
    for (const auto& p : partial) all.insert(all.end(), p.begin(), p.end());
    return all;
}

MomentAccumulator estimate_moments(const Sampler& sampler, NormKind k, std::size_t dim, std::uint64_t trials,
                                   SeedSpec seed, unsigned workers) {
    if (trials < 2) throw Error(ErrorCode::InvalidArgument, "estimate_moments needs trials >= 2");
    const auto partial = run_blocks(trials, seed, workers, [&](Stream& rng, std::uint64_t count) {
        MomentAccumulator acc(dim, k);
        for (std::uint64_t t = 0; t < count; ++t) acc.push(sampler(rng));
        return acc;
    });
    MomentAccumulator total(dim, k);
    for (const auto& p : partial) total.merge(p);
    return total;
}

}  // namespace tailgate::mc
