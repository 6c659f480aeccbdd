#include "tailgate/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "tailgate/numerics.hpp"

namespace tailgate::ineq {

namespace {

constexpr double kTol = kExactTolerance;

// P(||X|| >= l) as a step function, evaluated by binary search.
class TailFn {
public:
    TailFn(const FiniteDistribution& d, NormKind k) {
        const auto law = exact::norm_law(d, k);
        for (const auto& a : law.atoms()) norms_.push_back(a.point[0]);
        suffix_.assign(norms_.size() + 1, 0.0);
        ExactSum s;
        const auto atoms = law.atoms();
        for (std::size_t i = atoms.size(); i-- > 0;) {
            s.add(atoms[i].prob);
            suffix_[i] = s.value();
        }
    }

    double operator()(double lambda) const {
        const auto i = std::lower_bound(norms_.begin(), norms_.end(), lambda) - norms_.begin();
        return suffix_[static_cast<std::size_t>(i)];
    }

    const std::vector<double>& norms() const noexcept { return norms_; }

private:
    std::vector<double> norms_;
    std::vector<double> suffix_;
};

// Sorted unique points plus the midpoint of every consecutive pair.
std::vector<double> with_midpoints(std::vector<double> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> out;
    out.reserve(2 * pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) out.push_back(0.5 * (pts[i - 1] + pts[i]));
        out.push_back(pts[i]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double lp(const FiniteDistribution& d, NormKind k) { return exact::lp_norm(d, k, 2.0); }

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

// Tracks the tightest point of a grid check (smallest rhs - lhs).
struct Tightest {
    double margin = std::numeric_limits<double>::infinity();
    double lhs = 0.0;
    double rhs = 0.0;

    void offer(double l, double r) {
        if (r - l < margin) {
            margin = r - l;
            lhs = l;
            rhs = r;
        }
    }

    void into(CheckReport& rep) const {
        rep.lhs = lhs;
        rep.rhs = rhs;
        rep.margin = std::isfinite(margin) ? margin : 0.0;
    }
};

}  // namespace

FamilyLaws family_laws(const ComponentFamily& fam) {
    auto sum = exact::sum_family(fam).law;
    auto cover = regular_cover(fam);
    auto cover_sum = exact::iid_sum(cover, fam.size()).law;
    return {std::move(sum), std::move(cover), std::move(cover_sum), fam.size()};
}

FiniteDistribution shared_index_difference(const ComponentFamily& fam) {
    std::vector<FiniteDistribution> sym;
    sym.reserve(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k) sym.push_back(symmetrize(fam.finite(k)));
    return exact::iid_sum(regular_cover(ComponentFamily(std::move(sym))), fam.size()).law;
}

CheckReport check_disymm2(const FiniteDistribution& d, NormKind k) {
    const double x2 = lp(d, k);
    const double xs2 = lp(symmetrize(d), k);
    const double em = norm(mean(d), k);
    const double middle = xs2 + em;
    const double upper = 3.0 * x2;

    CheckReport r;
    r.name = "disymm2";
    r.mode = Mode::Exact;
    r.lhs = x2;
    r.rhs = middle;
    r.margin = std::min(middle - x2, upper - middle);
    r.pass = r.margin >= -kTol;
    r.values = {{"x_l2", x2}, {"xs_l2", xs2}, {"mean_norm", em}, {"middle", middle}, {"upper", upper}};
    return r;
}

CheckReport check_comp_moment(const ComponentFamily& fam, NormKind k) {
    const auto laws = family_laws(fam);
    const double s2 = lp(laws.sum, k);
    const double st2 = lp(laws.cover_sum, k);
    const double sym2 = lp(symmetrize(laws.sum), k);
    const double symt2 = lp(shared_index_difference(fam), k);
    const double mean_s = norm(mean(laws.sum), k);
    const double mean_st = norm(mean(laws.cover_sum), k);
    const double mean_gap = norm(mean(laws.sum) - mean(laws.cover_sum), k);

    const double ratio = safe_ratio(s2, st2);
    const double moment1_ratio = safe_ratio(sym2, symt2);
    const double chain1 = sym2 + mean_s;
    const double chain2 = 4.0 * (symt2 + mean_st);
    const double chain3 = 12.0 * st2;

    CheckReport r;
    r.name = "comp_moment";
    r.mode = Mode::Exact;
    r.lhs = s2;
    r.rhs = 12.0 * st2;
    r.margin = r.rhs - r.lhs;
    const bool chain_ok =
        s2 <= chain1 + kTol && chain1 <= chain2 + kTol && chain2 <= chain3 + kTol && mean_gap <= kTol;
    r.pass = r.margin >= -kTol && sym2 <= 4.0 * symt2 + kTol && chain_ok;
    r.values = {{"s_l2", s2},
                {"cover_sum_l2", st2},
                {"ratio", ratio},
                {"sym_l2", sym2},
                {"shared_index_sym_l2", symt2},
                {"moment1_ratio", moment1_ratio},
                {"chain_disymm", chain1},
                {"chain_moment1", chain2},
                {"chain_final", chain3},
                {"mean_gap", mean_gap}};
    return r;
}

CheckReport check_median_symmetrization(const ComponentFamily& fam, NormKind k, const Grid& grid) {
    const auto sum = exact::sum_family(fam).law;
    const double M = exact::median_norm(sum, k).value;
    const auto sym = symmetrize(sum);
    const TailFn sym_tail(sym, k);
    const auto law = exact::norm_law(sum, k);

    std::vector<double> lambdas;
    if (grid) {
        lambdas = *grid;
    } else {
        std::vector<double> pts{0.0};
        for (const auto& a : law.atoms())
            if (a.point[0] - M >= 0.0) pts.push_back(a.point[0] - M);
        lambdas = with_midpoints(pts);
        lambdas.push_back(lambdas.back() + 1.0);
    }

    CheckReport r;
    r.name = "median_symmetrization";
    r.mode = Mode::Exact;
    Tightest tight;
    bool ok = true;
    for (double l : lambdas) {
        ExactSum lhs;
        for (const auto& a : law.atoms())
            if (a.point[0] - M >= l) lhs.add(a.prob);
        const double rhs = 2.0 * sym_tail(l);
        ok = ok && lhs.value() <= rhs + kTol;
        tight.offer(lhs.value(), rhs);
        r.details.push_back({{"lambda", l}, {"lhs", lhs.value()}, {"rhs", rhs}});
    }
    tight.into(r);
    r.pass = ok;
    r.values = {{"median", M}, {"grid_points", static_cast<double>(lambdas.size())}};
    return r;
}

CheckReport check_first_ineq(const ComponentFamily& fam, NormKind k, const Grid& grid) {
    const auto laws = family_laws(fam);
    const auto sym = symmetrize(laws.sum);
    const auto diff = shared_index_difference(fam);
    const TailFn sym_tail(sym, k), diff_tail(diff, k), cover_tail(laws.cover_sum, k);

    std::vector<double> lambdas;
    if (grid) {
        lambdas = *grid;
    } else {
        std::vector<double> pts{0.0};
        for (double r : sym_tail.norms()) pts.push_back(r);
        for (double r : diff_tail.norms()) pts.push_back(2.0 * r);
        lambdas = with_midpoints(pts);
        lambdas.push_back(lambdas.back() + 1.0);
    }

    CheckReport r;
    r.name = "first_ineq";
    r.mode = Mode::Exact;
    Tightest tight;
    bool composite_ok = true, step_ok = true;
    std::size_t prop1_violations = 0;
    for (double l : lambdas) {
        const double lhs = sym_tail(l);
        const double middle = 8.0 * diff_tail(l / 2.0);
        const double rhs = 16.0 * cover_tail(l / 4.0);
        // Symmetrisation-tail step at t = l/2 with X = ~S_n, X - X' the shared-index difference.
        const double step_lhs = diff_tail(l / 2.0);
        const double step_rhs = 2.0 * cover_tail(l / 4.0);
        composite_ok = composite_ok && lhs <= rhs + kTol;
        step_ok = step_ok && step_lhs <= step_rhs + kTol;
        if (lhs > middle + kTol) ++prop1_violations;
        tight.offer(lhs, rhs);
        r.details.push_back({{"lambda", l},
                             {"lhs", lhs},
                             {"middle", middle},
                             {"rhs", rhs},
                             {"step_lhs", step_lhs},
                             {"step_rhs", step_rhs}});
    }
    tight.into(r);
    r.pass = composite_ok && step_ok;
    r.values = {{"composite_holds", composite_ok ? 1.0 : 0.0},
                {"symmetrization_step_holds", step_ok ? 1.0 : 0.0},
                {"factor8_violations", static_cast<double>(prop1_violations)},
                {"grid_points", static_cast<double>(lambdas.size())}};
    return r;
}

CheckReport check_first_ineq_mc(const ComponentFamily& fam, NormKind k, const std::vector<double>& grid,
                                const McOptions& mc) {
    const mc::FamilySampler sampler(fam);
    struct Norms {
        std::vector<double> sym, cover;
    };
    const auto parts = mc::run_blocks(mc.trials, mc.seed, mc.workers, [&](Stream& rng, std::uint64_t count) {
        Norms out;
        mc::CouplingOptions opt;
        opt.norm = k;
        for (std::uint64_t t = 0; t < count; ++t) {
            const auto d = mc::array_coupling(sampler, rng, opt);
            out.sym.push_back(norm(d.s - d.s_prime, k));
            out.cover.push_back(norm(d.s_tilde, k));
        }
        return out;
    });
    std::vector<double> sym, cover;
    for (const auto& p : parts) {
        sym.insert(sym.end(), p.sym.begin(), p.sym.end());
        cover.insert(cover.end(), p.cover.begin(), p.cover.end());
    }
    std::sort(sym.begin(), sym.end());
    std::sort(cover.begin(), cover.end());

    CheckReport r;
    r.name = "first_ineq";
    r.mode = Mode::MonteCarlo;
    bool ok = true;
    Tightest tight;
    for (double l : grid) {
        const auto lhs = mc::tail_from_sorted(sym, l, mc.level, mc.seed);
        const auto rhs = mc::tail_from_sorted(cover, l / 4.0, mc.level, mc.seed);
        ok = ok && lhs.ci_low <= 16.0 * rhs.ci_high;
        if (16.0 * rhs.ci_high - lhs.ci_low < tight.margin) {
            tight.offer(lhs.ci_low, 16.0 * rhs.ci_high);
            r.lhs_ci = Interval{lhs.ci_low, lhs.ci_high};
            r.rhs_ci = Interval{16.0 * rhs.ci_low, 16.0 * rhs.ci_high};
        }
        r.details.push_back({{"lambda", l},
                             {"lhs", lhs.p_hat},
                             {"lhs_ci_low", lhs.ci_low},
                             {"lhs_ci_high", lhs.ci_high},
                             {"rhs", 16.0 * rhs.p_hat},
                             {"rhs_ci_low", 16.0 * rhs.ci_low},
                             {"rhs_ci_high", 16.0 * rhs.ci_high}});
    }
    tight.into(r);
    r.pass = ok;
    r.values = {{"trials", static_cast<double>(mc.trials)}};
    return r;
}

CheckReport check_elementary_maximal(const ComponentFamily& fam, NormKind k, const Grid& t_grid) {
    const std::size_t n = fam.size();
    if (n > 6) throw Error(ErrorCode::InvalidArgument, "elementary maximal check enumerates at most n = 6 summands");
    const auto comps = fam.finite_components();
    std::size_t outcomes = 1;
    for (const auto& c : comps) {
        if (outcomes > exact::kSupportCap / c.size())
            throw Error(ErrorCode::SupportOverflow, "product space exceeds the support cap");
        outcomes *= c.size();
    }

    std::vector<Atom> max_term, max_partial;
    max_term.reserve(outcomes);
    max_partial.reserve(outcomes);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t o = 0; o < outcomes; ++o) {
        double p = 1.0, mt = 0.0, mp = 0.0;
        Vector partial = Vector::zero(fam.dim());
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = comps[i].atoms()[idx[i]];
            p *= a.prob;
            partial += a.point;
            mt = std::max(mt, norm(a.point, k));
            mp = std::max(mp, norm(partial, k));
        }
        max_term.push_back({Vector{mt}, p});
        max_partial.push_back({Vector{mp}, p});
        for (std::size_t i = 0; i < n && ++idx[i] == comps[i].size(); ++i) idx[i] = 0;
    }
    const FiniteDistribution term_law(std::move(max_term));
    const FiniteDistribution partial_law(std::move(max_partial));
    const TailFn term_tail(term_law, NormKind::LInf), partial_tail(partial_law, NormKind::LInf);

    std::vector<double> ts;
    if (t_grid) {
        ts = *t_grid;
    } else {
        std::vector<double> pts{0.0};
        for (double m : term_tail.norms()) pts.push_back(m / 2.0);
        ts = with_midpoints(pts);
        ts.push_back(ts.back() + 1.0);
    }

    CheckReport r;
    r.name = "elementary_maximal";
    r.mode = Mode::Exact;
    Tightest tight;
    bool ok = true;
    for (double t : ts) {
        const double lhs = term_tail(2.0 * t);
        const double rhs = partial_tail(t);
        ok = ok && lhs <= rhs + kTol;
        tight.offer(lhs, rhs);
        r.details.push_back({{"t", t}, {"lhs", lhs}, {"rhs", rhs}});
    }
    tight.into(r);
    r.pass = ok;
    r.values = {{"outcomes", static_cast<double>(outcomes)}, {"grid_points", static_cast<double>(ts.size())}};
    return r;
}

HitczenkoEstimate estimate_hitczenko_constants(const FiniteDistribution& d, std::size_t n, double q, double p,
                                               NormKind k, const McOptions& mc) {
    if (!(p >= 1.0) || !(q >= p)) throw Error(ErrorCode::InvalidArgument, "need q >= p >= 1");
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "need n >= 1");
    if (mc.trials < 2) throw Error(ErrorCode::InvalidArgument, "need trials >= 2");
    const mc::FamilySampler sampler(ComponentFamily(std::vector<FiniteDistribution>{d}));
    struct Moments {
        RunningStats star_q, star_p, max_q, end_p;
    };
    const auto parts = mc::run_blocks(mc.trials, mc.seed, mc.workers, [&](Stream& rng, std::uint64_t count) {
        Moments m;
        for (std::uint64_t t = 0; t < count; ++t) {
            Vector s = Vector::zero(d.dim());
            double s_star = 0.0, x_star = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Vector x = sampler.draw(0, rng);
                s += x;
                s_star = std::max(s_star, norm(s, k));
                x_star = std::max(x_star, norm(x, k));
            }
            m.star_q.push(std::pow(s_star, q));
            m.star_p.push(std::pow(s_star, p));
            m.max_q.push(std::pow(x_star, q));
            m.end_p.push(std::pow(norm(s, k), p));
        }
        return m;
    });
    Moments m;
    for (const auto& part : parts) {
        m.star_q.merge(part.star_q);
        m.star_p.merge(part.star_p);
        m.max_q.merge(part.max_q);
        m.end_p.merge(part.end_p);
    }
    auto root = [](double v, double r) { return std::pow(std::max(v, 0.0), 1.0 / r); };
    auto up = [](const RunningStats& s) { return s.mean() + 3.0 * s.std_error(); };
    auto down = [](const RunningStats& s) { return s.mean() - 3.0 * s.std_error(); };

    const double star_q = root(m.star_q.mean(), q), star_p = root(m.star_p.mean(), p);
    const double max_q = root(m.max_q.mean(), q), end_p = root(m.end_p.mean(), p);
    const double c0_point = safe_ratio(star_q, (q / p) * (star_p + max_q));
    const double c1_point = safe_ratio(star_p, end_p);
    const double c0_up = safe_ratio(root(up(m.star_q), q), (q / p) * (root(down(m.star_p), p) + root(down(m.max_q), q)));
    const double c1_up = safe_ratio(root(up(m.star_p), p), root(down(m.end_p), p));

    HitczenkoEstimate out;
    out.c0.constant_name = "c0";
    out.c0.value = c0_up;
    out.c0.search_mode = SearchMode::DirectRatio;
    out.c0.mode = Mode::MonteCarlo;
    out.c0.values = {{"point", c0_point}, {"s_star_q", star_q}, {"s_star_p", star_p}, {"x_star_q", max_q},
                     {"n", static_cast<double>(n)}, {"q", q}, {"p", p}, {"trials", static_cast<double>(mc.trials)}};
    out.c1.constant_name = "c1";
    out.c1.value = c1_up;
    out.c1.search_mode = SearchMode::DirectRatio;
    out.c1.mode = Mode::MonteCarlo;
    out.c1.values = {{"point", c1_point}, {"s_star_p", star_p}, {"s_n_p", end_p},
                     {"n", static_cast<double>(n)}, {"p", p}, {"trials", static_cast<double>(mc.trials)}};
    return out;
}

ConstantEstimate check_rosenthal_form(const FiniteDistribution& d, std::size_t n, double L, NormKind k) {
    if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "bound L must be positive");
    for (const auto& a : d.atoms())
        if (!(norm(a.point, k) < L))
            throw Error(ErrorCode::BoundViolation, "atom of norm " + std::to_string(norm(a.point, k)) +
                                                       " is not below L = " + std::to_string(L));
    const auto s = exact::iid_sum(d, n).law;
    const double m1 = exact::norm_moment(s, k, 1.0);
    const double m2 = exact::norm_moment(s, k, 2.0);
    const double slack = 1e-12 * std::max(1.0, m2);
    auto feasible = [&](double c) { return m1 * m1 >= c * m2 - L * L - slack; };

    constexpr double tol = 1e-9;
    double c = 1.0;
    if (!feasible(1.0)) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol * hi) {
            const double mid = 0.5 * (lo + hi);
            (feasible(mid) ? lo : hi) = mid;
        }
        c = lo;
    }
    if (!(c > 0.0)) throw Error(ErrorCode::Infeasible, "no positive constant satisfies the moment inequality");

    ConstantEstimate e;
    e.constant_name = "c2";
    e.value = c;
    e.search_mode = SearchMode::Bisection;
    e.tolerance = tol;
    e.values = {{"mean_norm", m1}, {"mean_sq_norm", m2}, {"L", L}, {"n", static_cast<double>(n)},
                {"closed_form", m2 > 0.0 ? std::min(1.0, (m1 * m1 + L * L) / m2) : 1.0}};
    return e;
}

CheckReport check_truncation_pipeline(const ComponentFamily& fam, NormKind k, const TruncationParams& params) {
    const std::size_t n = fam.size();
    const auto dn = static_cast<double>(n);
    double L = 0.0, M = 0.0;
    if (params.L) {
        L = *params.L;
    } else {
        M = exact::median_norm(exact::sum_family(fam).law, k).value;
        L = 2.0 * params.c1 * params.eps * M;
    }
    if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation level L must be positive");

    const auto cover = regular_cover(fam);

    // (a) Y_1..Y_n regularly cover ~Y.
    std::vector<FiniteDistribution> truncated;
    for (std::size_t i = 0; i < n; ++i) truncated.push_back(truncate(fam.finite(i), L, k));
    const ComponentFamily tfam(std::move(truncated));
    const auto battery = builtin_battery(tfam);
    const auto cover_rep = verify_cover(tfam, truncate(cover, L, k), battery);

    // (b) P(some ~X_k != ~Y_k) = 1 - (1-p)^n, cross-checked by convolving the
    // indicator law of {||~X|| >= L}.
    const double p = exact::tail(cover, L, k);
    const double union_formula = 1.0 - std::pow(1.0 - p, dn);
    std::vector<Atom> ind;
    for (const auto& a : cover.atoms()) ind.push_back({Vector{norm(a.point, k) >= L ? 1.0 : 0.0}, a.prob});
    const double union_enumerated = exact::tail(exact::iid_sum(FiniteDistribution(std::move(ind)), n).law, 0.5, k);
    const bool union_ok = std::abs(union_formula - union_enumerated) <= kTol;

    // (c) the non-tilde chain.
    ExactSum sum_tails;
    double none = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = exact::tail(fam.finite(i), L, k);
        sum_tails.add(t);
        none *= 1.0 - t;
    }
    const double union_nontilde = 1.0 - none;
    const double np = dn * p;
    const bool premise = union_formula <= 0.5;
    const bool chain_ok = union_nontilde <= sum_tails.value() + kTol && std::abs(sum_tails.value() - np) <= kTol &&
                          (!premise || np <= 2.0 * union_formula + kTol);

    const auto scalar = check_scalar_union_bound(n, 1000);

    CheckReport r;
    r.name = "truncation_pipeline";
    r.mode = Mode::Exact;
    r.lhs = np;
    r.rhs = premise ? 2.0 * union_formula : 1.0;
    r.margin = r.rhs - r.lhs;
    r.pass = cover_rep.pass && union_ok && chain_ok && scalar.pass;

    const double c1 = params.c1, eps = params.eps, delta = params.delta;
    r.values = {{"L", L},
                {"median", M},
                {"p", p},
                {"union_formula", union_formula},
                {"union_enumerated", union_enumerated},
                {"union_nontilde", union_nontilde},
                {"sum_tails", sum_tails.value()},
                {"n_p", np},
                {"premise_holds", premise ? 1.0 : 0.0},
                {"truncated_cover_discrepancy", -cover_rep.margin},
                {"scalar_bound_holds", scalar.pass ? 1.0 : 0.0},
                {"assume_delta_lt_inv_2c1", delta < 1.0 / (2.0 * c1) ? 1.0 : 0.0},
                {"assume_one_minus_32_2c1_delta_ge_half", 1.0 - (32.0 + 2.0 * c1) * delta >= 0.5 ? 1.0 : 0.0}};
    if (params.c2) {
        const double c2 = *params.c2;
        r.values.emplace_back("assume_eps_le_sqrt_c2_over_48c1", eps <= std::sqrt(c2) / (48.0 * c1) ? 1.0 : 0.0);
        r.values.emplace_back("assume_eps_le_sqrt_c2_over_48", eps <= std::sqrt(c2) / 48.0 ? 1.0 : 0.0);
        r.values.emplace_back("assume_1_plus_c1_delta_lt_c2_over_8", (1.0 + c1) * delta < c2 / 8.0 ? 1.0 : 0.0);
    }
    r.values.emplace_back("assembled_c", std::max({32.0, 2.0 / eps, 1.0 / delta}));
    return r;
}

CheckReport check_scalar_union_bound(std::size_t n_max, std::size_t points) {
    if (points < 2 || n_max == 0) throw Error(ErrorCode::InvalidArgument, "need n_max >= 1 and points >= 2");
    CheckReport r;
    r.name = "scalar_union_bound";
    r.mode = Mode::Exact;
    Tightest tight;
    bool ok = true;
    std::size_t checked = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto dn = static_cast<double>(n);
        for (std::size_t i = 0; i < points; ++i) {
            const double x = static_cast<double>(i) / static_cast<double>(points - 1);
            const double u = 1.0 - std::pow(1.0 - x, dn);
            if (u > 0.5) continue;
            ++checked;
            ok = ok && dn * x <= 2.0 * u + 1e-12;
            tight.offer(dn * x, 2.0 * u);
        }
    }
    tight.into(r);
    r.pass = ok;
    r.values = {{"n_max", static_cast<double>(n_max)},
                {"points", static_cast<double>(points)},
                {"checked", static_cast<double>(checked)}};
    return r;
}

namespace {

struct NormMoments {
    FiniteDistribution law;
    double m1, m2;
};

NormMoments norm_moments(const FiniteDistribution& d, NormKind k) {
    auto law = exact::norm_law(d, k);
    const double m1 = exact::norm_moment(law, NormKind::LInf, 1.0);
    const double m2 = exact::norm_moment(law, NormKind::LInf, 2.0);
    if (m1 == 0.0) throw Error(ErrorCode::ZeroMean, "E||X|| = 0; the Paley-Zygmund bound is undefined");
    return {std::move(law), m1, m2};
}

std::pair<double, double> paley_zygmund_sides(const NormMoments& nm, double lambda) {
    const double prob = exact::tail(nm.law, lambda * nm.m1, NormKind::LInf);
    const double bound = (1.0 - lambda) * (1.0 - lambda) * nm.m1 * nm.m1 / nm.m2;
    return {bound, prob};
}

}  // namespace

CheckReport check_paley_zygmund(const FiniteDistribution& d, double lambda, NormKind k) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
    const auto nm = norm_moments(d, k);
    const auto [bound, prob] = paley_zygmund_sides(nm, lambda);
    CheckReport r;
    r.name = "paley_zygmund";
    r.mode = Mode::Exact;
    r.lhs = bound;
    r.rhs = prob;
    r.margin = prob - bound;
    r.pass = r.margin >= -kTol;
    r.values = {{"lambda", lambda}, {"mean_norm", nm.m1}, {"mean_sq_norm", nm.m2}};
    return r;
}

CheckReport check_paley_zygmund_grid(const FiniteDistribution& d, NormKind k, const Grid& grid) {
    const auto nm = norm_moments(d, k);
    std::vector<double> lambdas;
    if (grid) {
        lambdas = *grid;
    } else {
        for (int i = 1; i < 100; ++i) lambdas.push_back(i / 100.0);
        for (const auto& a : nm.law.atoms()) {
            const double l = a.point[0] / nm.m1;
            if (l > 0.0 && l < 1.0) lambdas.push_back(l);
        }
        std::sort(lambdas.begin(), lambdas.end());
        lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    }
    CheckReport r;
    r.name = "paley_zygmund";
    r.mode = Mode::Exact;
    Tightest tight;
    bool ok = true;
    for (double l : lambdas) {
        if (!(l > 0.0 && l < 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0,1)");
        const auto [bound, prob] = paley_zygmund_sides(nm, l);
        ok = ok && prob >= bound - kTol;
        tight.offer(bound, prob);
        r.details.push_back({{"lambda", l}, {"bound", bound}, {"probability", prob}});
    }
    tight.into(r);
    r.pass = ok;
    r.values = {{"mean_norm", nm.m1}, {"mean_sq_norm", nm.m2}, {"grid_points", static_cast<double>(lambdas.size())}};
    return r;
}

CheckReport check_mean_identity(const ComponentFamily& fam) {
    const auto laws = family_laws(fam);
    const Vector a = mean(laws.sum), b = mean(laws.cover_sum);
    CheckReport r;
    r.name = "mean_identity";
    r.mode = Mode::Exact;
    r.lhs = norm(a - b, NormKind::LInf);
    r.rhs = 0.0;
    r.margin = -r.lhs;
    r.pass = r.lhs <= kTol;
    return r;
}

std::vector<double> theorem_grid(const FamilyLaws& laws, NormKind k) {
    auto pts = exact::support_norms(laws.sum, k);
    pts.push_back(0.0);
    return with_midpoints(pts);
}

bool theorem_feasible(const FamilyLaws& laws, NormKind k, double c, const std::vector<double>& grid) {
    const TailFn lhs(laws.sum, k), rhs(laws.cover_sum, k);
    for (double l : grid)
        if (lhs(l) > c * rhs(l / c) + 1e-12) return false;
    return true;
}

double exact_min_constant(const FamilyLaws& laws, NormKind k, const std::vector<double>& grid) {
    const TailFn lhs(laws.sum, k), rhs(laws.cover_sum, k);
    return minimal_constant(grid, lhs, rhs, kConstantTolerance);
}

namespace {

ConstantEstimate theorem_exact(const ComponentFamily& fam, NormKind k, const Grid& grid) {
    const auto laws = family_laws(fam);
    const auto lambdas = grid ? *grid : theorem_grid(laws, k);
    const double c = exact_min_constant(laws, k, lambdas);
    if (!std::isfinite(c))
        throw Error(ErrorCode::Infeasible, "no c <= 1e6 satisfies the tail comparison on this instance");
    ConstantEstimate e;
    e.constant_name = "c";
    e.value = c;
    e.lambda_grid = lambdas;
    e.search_mode = SearchMode::Bisection;
    e.tolerance = kConstantTolerance;
    e.mode = Mode::Exact;
    e.values = {{"n", static_cast<double>(fam.size())},
                {"sum_support", static_cast<double>(laws.sum.size())},
                {"cover_sum_support", static_cast<double>(laws.cover_sum.size())}};
    return e;
}

ConstantEstimate theorem_mc(const ComponentFamily& fam, NormKind k, const Grid& grid, const McOptions& mc) {
    if (mc.trials == 0) throw Error(ErrorCode::InvalidArgument, "Monte Carlo mode needs trials >= 1");
    const mc::FamilySampler sampler(fam);
    struct Norms {
        std::vector<double> sum, cover;
    };
    const auto parts = mc::run_blocks(mc.trials, mc.seed, mc.workers, [&](Stream& rng, std::uint64_t count) {
        Norms out;
        out.sum.reserve(count);
        out.cover.reserve(count);
        mc::CouplingOptions opt;
        opt.norm = k;
        for (std::uint64_t t = 0; t < count; ++t) {
            const auto d = mc::array_coupling(sampler, rng, opt);
            out.sum.push_back(norm(d.s, k));
            out.cover.push_back(norm(d.s_tilde, k));
        }
        return out;
    });
    std::vector<double> sum, cover;
    sum.reserve(mc.trials);
    cover.reserve(mc.trials);
    for (const auto& p : parts) {
        sum.insert(sum.end(), p.sum.begin(), p.sum.end());
        cover.insert(cover.end(), p.cover.begin(), p.cover.end());
    }
    std::sort(sum.begin(), sum.end());
    std::sort(cover.begin(), cover.end());

    std::vector<double> lambdas;
    if (grid) {
        lambdas = *grid;
    } else {
        // 32 empirical quantiles of ||S_n||.
        for (int i = 0; i < 32; ++i) {
            const auto at = static_cast<std::size_t>((i + 0.5) / 32.0 * static_cast<double>(sum.size()));
            const double v = sum[std::min(at, sum.size() - 1)];
            if (v > 0.0) lambdas.push_back(v);
        }
        std::sort(lambdas.begin(), lambdas.end());
        lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
        if (lambdas.empty()) lambdas.push_back(0.0);
    }

    // Per-point level chosen so that the 2|grid| comparisons hold jointly at mc.level.
    const double point_level = 1.0 - (1.0 - mc.level) / (2.0 * static_cast<double>(lambdas.size()));
    const auto n_trials = static_cast<std::uint64_t>(sum.size());
    std::map<std::uint64_t, Interval> ci_cache;
    auto ci = [&](std::uint64_t hits) -> const Interval& {
        auto it = ci_cache.find(hits);
        if (it == ci_cache.end()) it = ci_cache.emplace(hits, clopper_pearson(hits, n_trials, point_level)).first;
        return it->second;
    };
    auto hits = [](const std::vector<double>& sorted, double t) {
        return static_cast<std::uint64_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
    };
    const auto dn = static_cast<double>(n_trials);
    auto lhs_point = [&](double l) { return static_cast<double>(hits(sum, l)) / dn; };
    auto rhs_point = [&](double t) { return static_cast<double>(hits(cover, t)) / dn; };
    auto lhs_low = [&](double l) { return ci(hits(sum, l)).low; };
    auto lhs_high = [&](double l) { return ci(hits(sum, l)).high; };
    auto rhs_low = [&](double t) { return ci(hits(cover, t)).low; };
    auto rhs_high = [&](double t) { return ci(hits(cover, t)).high; };

    const double c_point = minimal_constant(lambdas, lhs_point, rhs_point, kConstantTolerance);
    const double c_lo = minimal_constant(lambdas, lhs_low, rhs_high, kConstantTolerance);
    const double c_hi = minimal_constant(lambdas, lhs_high, rhs_low, kConstantTolerance);

    ConstantEstimate e;
    e.constant_name = "c";
    e.value = std::isfinite(c_point) ? c_point : c_lo;
    e.lambda_grid = lambdas;
    e.search_mode = SearchMode::Bisection;
    e.tolerance = kConstantTolerance;
    e.mode = Mode::MonteCarlo;
    e.bracket = Interval{c_lo, c_hi};
    e.values = {{"n", static_cast<double>(fam.size())},
                {"trials", static_cast<double>(mc.trials)},
                {"point_level", point_level},
                {"c_point", c_point}};
    return e;
}

}  // namespace

ConstantEstimate check_theorem_main(const ComponentFamily& fam, NormKind k, const Grid& grid, Mode mode,
                                    const McOptions& mc) {
    return mode == Mode::Exact ? theorem_exact(fam, k, grid) : theorem_mc(fam, k, grid, mc);
}

CheckReport converse_counterexample(std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "the converse counterexample needs n >= 2");
    std::vector<FiniteDistribution> comps{FiniteDistribution::rademacher(1)};
    for (std::size_t i = 1; i < n; ++i) comps.push_back(FiniteDistribution::point_mass(Vector{0.0}));
    const ComponentFamily fam(std::move(comps));
    const auto laws = family_laws(fam);
    const auto dn = static_cast<double>(n);

    const double lhs = exact::tail(laws.cover_sum, dn, NormKind::L2);
    // For every c in [1, n) the threshold n/c exceeds 1 = |S_n|.
    const double rhs = 1.0 * exact::tail(laws.sum, dn / 1.0, NormKind::L2);
    const double rhs_near_n = dn * exact::tail(laws.sum, dn / std::nextafter(dn, 0.0), NormKind::L2);
    const double p_one = laws.cover.prob_of(Vector{1.0});
    const double claimed_p = std::pow(2.0, -(dn + 1.0));
    const double claimed_bound = std::pow(claimed_p, dn);

    CheckReport r;
    r.name = "converse_counterexample";
    r.mode = Mode::Exact;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.pass = lhs > 0.0 && rhs == 0.0 && rhs_near_n == 0.0 && lhs >= claimed_bound;
    r.values = {{"n", dn},
                {"lambda", dn},
                {"cover_sum_tail", lhs},
                {"sum_tail_c1", rhs},
                {"sum_tail_c_below_n", rhs_near_n},
                {"cover_prob_one", p_one},
                {"claimed_cover_prob_one", claimed_p},
                {"claimed_lower_bound", claimed_bound}};
    return r;
}

Survey min_c_family_survey(const std::vector<ComponentFamily>& corpus, NormKind k, Mode mode, const McOptions& mc) {
    if (corpus.empty()) throw Error(ErrorCode::InvalidArgument, "survey corpus is empty");
    Survey s;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        McOptions inst = mc;
        inst.seed = mc.seed.child(i);
        s.estimates.push_back(check_theorem_main(corpus[i], k, std::nullopt, mode, inst));
        s.max_c = std::max(s.max_c, s.estimates.back().value);
    }
    return s;
}

}  // namespace tailgate::ineq
