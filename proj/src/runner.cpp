#include "tailgate/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "tailgate/corpus.hpp"
#include "tailgate/error.hpp"
#include "tailgate/inequality.hpp"
#include "tailgate/riemann.hpp"

namespace tailgate {

namespace {

Json record(const Record& r) {
    Json j = Json::object();
    for (const auto& [k, v] : r) j[k] = v;
    return j;
}

Json interval(const std::optional<Interval>& i) {
    if (!i) return nullptr;
    return Json::array({i->low, i->high});
}

Json to_json(const CheckReport& r) {
    Json j;
    j["kind"] = "check";
    j["name"] = r.name;
    j["mode"] = to_string(r.mode);
    j["pass"] = r.pass;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["lhs_ci"] = interval(r.lhs_ci);
    j["rhs_ci"] = interval(r.rhs_ci);
    j["values"] = record(r.values);
    Json details = Json::array();
    for (const auto& d : r.details) details.push_back(record(d));
    j["details"] = details;
    return j;
}

Json to_json(const ConstantEstimate& e) {
    Json j;
    j["kind"] = "constant";
    j["name"] = e.constant_name;
    j["mode"] = to_string(e.mode);
    j["pass"] = std::isfinite(e.value);
    j["value"] = e.value;
    j["search_mode"] = to_string(e.search_mode);
    j["tolerance"] = e.tolerance;
    j["bracket"] = interval(e.bracket);
    j["lambda_grid"] = e.lambda_grid;
    j["values"] = record(e.values);
    return j;
}

std::string num(double x) { return Json(x).dump(); }

ComponentFamily family_from(const Json& j, const std::string& field) {
    std::vector<Component> comps;
    for (std::size_t i = 0; i < j.size(); ++i)
        comps.push_back(parse_component(j[i], field + "[" + std::to_string(i) + "]"));
    return ComponentFamily(std::move(comps));
}

ineq::McOptions mc_options(const ExperimentConfig& c) {
    return {c.trials, SeedSpec{c.master_seed, 0}, c.workers, c.level};
}

struct Output {
    Json results = Json::array();
    std::ostringstream csv;
    bool pass = true;

    void add(const CheckReport& r) {
        pass = pass && r.pass;
        results.push_back(to_json(r));
        csv << r.name << ',' << to_string(r.mode) << ',' << (r.pass ? "true" : "false") << ',' << num(r.lhs) << ','
            << num(r.rhs) << ',' << num(r.margin) << '\n';
    }
};

constexpr const char* kCheckHeader = "name,mode,pass,lhs,rhs,margin\n";

[[noreturn]] void missing(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

void run_check(const ExperimentConfig& c, Output& out) {
    std::optional<ComponentFamily> fam;
    if (c.family) fam = family_from(*c.family, "family");
    std::optional<FiniteDistribution> dist;
    if (c.distribution) dist = parse_distribution(*c.distribution, "distribution");

    std::vector<std::string> checks = c.checks;
    if (checks.empty()) {
        if (fam) {
            checks = {"mean_identity", "comp_moment", "median_symmetrization", "first_ineq"};
            if (fam->size() <= 6) checks.push_back("elementary_maximal");
            checks.push_back("theorem_main");
        }
        if (dist) checks.insert(checks.end(), {"disymm2", "paley_zygmund"});
        if (checks.empty()) checks = {"scalar_union_bound"};
    }
    out.csv << kCheckHeader;
    const auto mc = mc_options(c);
    const ineq::Grid grid = c.lambda ? ineq::Grid(*c.lambda) : std::nullopt;
    auto need_family = [&](const std::string& name) -> const ComponentFamily& {
        if (!fam) missing("family", "check '" + name + "' needs a family");
        return *fam;
    };
    auto need_dist = [&](const std::string& name) -> const FiniteDistribution& {
        if (!dist) missing("distribution", "check '" + name + "' needs a finite distribution");
        return *dist;
    };
    for (const auto& name : checks) {
        if (name == "disymm2") {
            out.add(ineq::check_disymm2(need_dist(name), c.norm));
        } else if (name == "paley_zygmund") {
            out.add(ineq::check_paley_zygmund_grid(need_dist(name), c.norm, grid));
        } else if (name == "scalar_union_bound") {
            out.add(ineq::check_scalar_union_bound());
        } else if (name == "comp_moment") {
            out.add(ineq::check_comp_moment(need_family(name), c.norm));
        } else if (name == "median_symmetrization") {
            out.add(ineq::check_median_symmetrization(need_family(name), c.norm, grid));
        } else if (name == "first_ineq") {
            if (c.mode == Mode::MonteCarlo) {
                if (!c.lambda) missing("lambda", "MONTE_CARLO first_ineq needs an explicit grid");
                out.add(ineq::check_first_ineq_mc(need_family(name), c.norm, *c.lambda, mc));
            } else {
                out.add(ineq::check_first_ineq(need_family(name), c.norm, grid));
            }
        } else if (name == "elementary_maximal") {
            out.add(ineq::check_elementary_maximal(need_family(name), c.norm, grid));
        } else if (name == "truncation_pipeline") {
            out.add(ineq::check_truncation_pipeline(
                need_family(name), c.norm, {c.truncation_level, c.c1, c.eps, c.delta, c.c2}));
        } else if (name == "mean_identity") {
            out.add(ineq::check_mean_identity(need_family(name)));
        } else if (name == "theorem_main") {
            const auto e = ineq::check_theorem_main(need_family(name), c.norm, grid, c.mode, mc);
            out.results.push_back(to_json(e));
            out.pass = out.pass && std::isfinite(e.value);
            out.csv << "theorem_main," << to_string(e.mode) << ',' << (std::isfinite(e.value) ? "true" : "false")
                    << ',' << num(e.value) << ",,\n";
        } else if (name == "rosenthal_form" || name == "hitczenko") {
            const auto& d = need_dist(name);
            const std::size_t n = c.n.front();
            std::vector<ConstantEstimate> es;
            if (name == "rosenthal_form") {
                if (!c.truncation_level) missing("L", "rosenthal_form needs the bound L");
                es.push_back(ineq::check_rosenthal_form(d, n, *c.truncation_level, c.norm));
            } else {
                const auto h = ineq::estimate_hitczenko_constants(d, n, c.q, c.p, c.norm, mc);
                es = {h.c0, h.c1};
            }
            for (const auto& e : es) {
                out.results.push_back(to_json(e));
                out.pass = out.pass && std::isfinite(e.value);
                out.csv << name << ',' << to_string(e.mode) << ',' << (std::isfinite(e.value) ? "true" : "false")
                        << ',' << num(e.value) << ",,\n";
            }
        }
    }
}

void run_min_c(const ExperimentConfig& c, Output& out) {
    std::vector<ComponentFamily> corpus;
    if (c.corpus) corpus = corpus::theorem_corpus();
    if (c.families)
        for (std::size_t i = 0; i < c.families->size(); ++i)
            corpus.push_back(family_from((*c.families)[i], "families[" + std::to_string(i) + "]"));
    if (c.family) corpus.push_back(family_from(*c.family, "family"));
    if (corpus.empty()) missing("family", "min-c needs a family, families or corpus");

    const auto survey = ineq::min_c_family_survey(corpus, c.norm, c.mode, mc_options(c));
    out.csv << "instance,c,c_low,c_high\n";
    for (std::size_t i = 0; i < survey.estimates.size(); ++i) {
        const auto& e = survey.estimates[i];
        Json j = to_json(e);
        j["instance"] = i;
        out.results.push_back(j);
        out.pass = out.pass && std::isfinite(e.value);
        out.csv << i << ',' << num(e.value) << ',' << (e.bracket ? num(e.bracket->low) : "") << ','
                << (e.bracket ? num(e.bracket->high) : "") << '\n';
    }
    Json summary;
    summary["kind"] = "survey";
    summary["instances"] = survey.estimates.size();
    summary["max_c"] = survey.max_c;
    out.results.push_back(summary);
}

void run_counterexample(const ExperimentConfig& c, Output& out) {
    out.csv << kCheckHeader;
    for (std::size_t n : c.n) out.add(ineq::converse_counterexample(n));
}

void run_cover_verify(const ExperimentConfig& c, Output& out) {
    if (!c.family) missing("family", "cover-verify needs a family");
    const auto fam = family_from(*c.family, "family");
    if (!fam.all_finite()) missing("family", "cover-verify needs finite components");
    const auto cover = c.cover ? parse_distribution(*c.cover, "cover") : regular_cover(fam);
    out.csv << kCheckHeader;
    out.add(verify_cover(fam, cover, builtin_battery(fam)));
    if (fam.dim() == 1) {
        CheckReport r;
        r.name = "cdf_mean";
        r.mode = Mode::Exact;
        r.lhs = cdf_mean_discrepancy(fam, cover);
        r.margin = -r.lhs;
        r.pass = r.lhs <= kExactTolerance;
        out.add(r);
    }
}

void run_riemann(const ExperimentConfig& c, Output& out) {
    if (!c.integrand) missing("integrand", "riemann needs an integrand");
    const auto f = parse_integrand(*c.integrand, "integrand");
    const SeedSpec seed{c.master_seed, 0};
    const auto& o = c.riemann;
    if (c.trials < 2) missing("trials", "riemann variance study needs trials >= 2");

    for (std::size_t i = 0; i < o.variance_n.size(); ++i) {
        const auto v = riemann::variance_study(f, o.variance_n[i], c.trials, seed.child(0).child(i), c.level,
                                               c.workers);
        Json j;
        j["kind"] = "variance";
        j["n"] = v.n;
        j["integral"] = f.exact_integral();
        for (const auto& [key, s] : {std::pair{"stratified", v.stratified}, std::pair{"plain", v.plain}}) {
            Json sj;
            sj["count"] = s.count;
            sj["mean"] = s.mean;
            sj["mean_se"] = s.mean_se;
            sj["variance"] = s.variance;
            sj["variance_se"] = s.variance_se;
            j[key] = sj;
        }
        j["separated"] = v.separated;
        if (!f.is_constant()) out.pass = out.pass && v.separated;
        out.results.push_back(j);
    }

    const auto t = riemann::tail_sum_diagnostic(f, o.epsilon, o.n_max, o.trials_per_n, seed.child(1), c.level,
                                                c.workers);
    Json tj;
    tj["kind"] = "tail_sum";
    tj["epsilon"] = t.epsilon;
    tj["integral"] = t.integral;
    tj["stabilization"] = t.stabilization;
    tj["threshold"] = riemann::kStabilizationThreshold;
    tj["decay_exponent"] = t.decay_exponent;
    tj["pass"] = t.stabilization < riemann::kStabilizationThreshold;
    Json rows = Json::array();
    out.csv << "n,p_hat,ci_low,ci_high,partial_sum_upper\n";
    for (const auto& row : t.rows) {
        rows.push_back(Json::array({row.n, row.tail.hits, row.tail.p_hat, row.tail.ci_low, row.tail.ci_high,
                                    row.partial_sum, row.partial_sum_upper}));
        out.csv << row.n << ',' << num(row.tail.p_hat) << ',' << num(row.tail.ci_low) << ','
                << num(row.tail.ci_high) << ',' << num(row.partial_sum_upper) << '\n';
    }
    tj["columns"] = {"n", "hits", "p_hat", "ci_low", "ci_high", "partial_sum", "partial_sum_upper"};
    tj["rows"] = rows;
    out.pass = out.pass && t.stabilization < riemann::kStabilizationThreshold;
    out.results.push_back(tj);

    const auto conv = riemann::convergence_experiment(f, o.schedule, o.trajectories, o.tail_from, o.epsilon,
                                                      seed.child(2), c.workers);
    Json cj;
    cj["kind"] = "convergence";
    cj["schedule"] = conv.schedule;
    cj["tail_from"] = conv.tail_from;
    cj["epsilon"] = conv.epsilon;
    cj["integral"] = conv.integral;
    cj["fraction_within"] = conv.fraction_within;
    cj["required_fraction"] = 0.99;
    cj["pass"] = conv.fraction_within >= 0.99;
    cj["max_tail_deviation"] = conv.max_tail_deviation;
    out.pass = out.pass && conv.fraction_within >= 0.99;
    out.results.push_back(cj);
}

}  // namespace

RunReport run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Output out;
    if (config.suite == "check") run_check(config, out);
    else if (config.suite == "min-c") run_min_c(config, out);
    else if (config.suite == "counterexample") run_counterexample(config, out);
    else if (config.suite == "cover-verify") run_cover_verify(config, out);
    else if (config.suite == "riemann") run_riemann(config, out);
    else throw Error(ErrorCode::ConfigInvalid, "suite: unknown suite '" + config.suite + "'");

    RunReport r;
    r.report["version"] = kVersion;
    r.report["suite"] = config.suite;
    r.report["seed"] = config.master_seed;
    r.report["config"] = echo(config);
    r.report["pass"] = out.pass;
    r.report["results"] = std::move(out.results);
    r.csv = out.csv.str();
    r.pass = out.pass;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string canonical(const Json& report) { return report.dump(2) + "\n"; }

ReplayResult replay(const std::string& report_text, unsigned workers) {
    Json stored;
    try {
        stored = Json::parse(report_text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("report: malformed JSON: ") + e.what());
    }
    if (!stored.is_object() || !stored.contains("config"))
        throw Error(ErrorCode::ConfigInvalid, "report: missing config echo");
    auto config = parse_config(stored["config"]);
    config.workers = workers;
    const std::string actual = canonical(run(config).report);

    ReplayResult res;
    std::istringstream a(report_text), b(actual);
    std::string la, lb;
    for (std::size_t line = 1;; ++line) {
        const bool ha = static_cast<bool>(std::getline(a, la));
        const bool hb = static_cast<bool>(std::getline(b, lb));
        if (!ha && !hb) break;
        if (ha != hb || la != lb) {
            res.first_difference_line = line;
            res.expected_line = ha ? la : "<end of report>";
            res.actual_line = hb ? lb : "<end of report>";
            return res;
        }
    }
    // Line-equal but byte-different (e.g. a missing final newline) still counts as a mismatch.
    res.identical = report_text == actual;
    if (!res.identical) {
        res.first_difference_line = 1 + static_cast<std::size_t>(std::count(actual.begin(), actual.end(), '\n'));
        res.expected_line = "<different line endings>";
        res.actual_line = "<canonical>";
    }
    return res;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidVector:
        case ErrorCode::DimMismatch:
        case ErrorCode::BoundViolation:
        case ErrorCode::ZeroMean:
            return kExitConfig;
        case ErrorCode::Infeasible:
        case ErrorCode::Mismatch:
            return kExitCheckFailed;
        default:
            return kExitInternal;
    }
}

}  // namespace tailgate
