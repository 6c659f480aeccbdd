#include "tailgate/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tailgate/error.hpp"

namespace tailgate {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ConfigInvalid, field + ": " + what);
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) invalid(field, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) invalid(field, "must be finite");
    return x;
}

double positive(const Json& j, const std::string& field) {
    const double x = number(j, field);
    if (!(x > 0.0)) invalid(field, "must be positive");
    return x;
}

std::uint64_t count(const Json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) invalid(field, "must be a non-negative integer, got " + j.dump());
    invalid(field, "expected a non-negative integer");
}

std::vector<double> numbers(const Json& j, const std::string& field) {
    if (j.is_number()) return {number(j, field)};
    if (!j.is_array()) invalid(field, "expected a number or an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> counts(const Json& j, const std::string& field) {
    std::vector<std::size_t> out;
    if (!j.is_array()) return {static_cast<std::size_t>(count(j, field))};
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(static_cast<std::size_t>(count(j[i], field + "[" + std::to_string(i) + "]")));
    return out;
}

Vector point(const Json& j, const std::string& field) {
    const auto xs = numbers(j, field);
    if (xs.empty() || xs.size() > kMaxDim) invalid(field, "point dimension must lie in 1..8");
    return Vector(std::span<const double>(xs));
}

const Json& only_key(const Json& j, const std::string& field) {
    if (!j.is_object() || j.size() != 1) invalid(field, "expected an object with exactly one tag");
    return j.begin().value();
}

template <class F>
auto wrap(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigInvalid) throw;
        invalid(field, e.what());
    }
}

}  // namespace

IntegrandSpec parse_integrand(const Json& j, const std::string& field) {
    const Json& body = only_key(j, field);
    const std::string tag = j.begin().key();
    return wrap(field, [&] {
        if (tag == "polynomial") return IntegrandSpec(PolynomialIntegrand{numbers(body, field + ".polynomial")});
        if (tag == "step") {
            if (!body.is_object() || !body.contains("breakpoints") || !body.contains("values"))
                invalid(field + ".step", "needs breakpoints and values");
            return IntegrandSpec(StepIntegrand{numbers(body["breakpoints"], field + ".step.breakpoints"),
                                               numbers(body["values"], field + ".step.values")});
        }
        if (tag == "power") {
            if (!body.is_object() || !body.contains("alpha")) invalid(field + ".power", "needs alpha");
            const double scale = body.contains("scale") ? number(body["scale"], field + ".power.scale") : 1.0;
            return IntegrandSpec(PowerIntegrand{number(body["alpha"], field + ".power.alpha"), scale});
        }
        invalid(field, "unknown integrand tag '" + tag + "'");
    });
}

FiniteDistribution parse_distribution(const Json& j, const std::string& field) {
    auto c = parse_component(j, field);
    if (!std::holds_alternative<FiniteDistribution>(c)) invalid(field, "expected a finite distribution");
    return std::get<FiniteDistribution>(std::move(c));
}

Component parse_component(const Json& j, const std::string& field) {
    const Json& body = only_key(j, field);
    const std::string tag = j.begin().key();
    return wrap(field, [&]() -> Component {
        if (tag == "atoms") {
            if (!body.is_array() || body.empty()) invalid(field + ".atoms", "expected a non-empty array");
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < body.size(); ++i) {
                const std::string f = field + ".atoms[" + std::to_string(i) + "]";
                if (!body[i].is_object() || !body[i].contains("point") || !body[i].contains("prob"))
                    invalid(f, "needs point and prob");
                atoms.push_back({point(body[i]["point"], f + ".point"), number(body[i]["prob"], f + ".prob")});
            }
            return FiniteDistribution(std::move(atoms));
        }
        if (tag == "delta") return FiniteDistribution::point_mass(point(body, field + ".delta"));
        if (tag == "rademacher") return FiniteDistribution::rademacher(count(body, field + ".rademacher"));
        if (tag == "uniform") {
            const auto ab = numbers(body, field + ".uniform");
            if (ab.size() != 2) invalid(field + ".uniform", "expected [a, b]");
            return ContinuousSpec(UniformInterval{ab[0], ab[1]});
        }
        if (tag == "pushforward") {
            if (!body.is_object() || !body.contains("integrand"))
                invalid(field + ".pushforward", "needs an integrand");
            const double a = body.contains("a") ? number(body["a"], field + ".pushforward.a") : 0.0;
            const double b = body.contains("b") ? number(body["b"], field + ".pushforward.b") : 1.0;
            return ContinuousSpec(
                PushforwardOfUniform{parse_integrand(body["integrand"], field + ".pushforward.integrand"), a, b});
        }
        invalid(field, "unknown distribution tag '" + tag + "'");
    });
}

namespace {

const std::set<std::string> kSuites{"check", "min-c", "counterexample", "riemann", "cover-verify"};
const std::set<std::string> kChecks{"disymm2",          "comp_moment",   "median_symmetrization",
                                    "first_ineq",       "elementary_maximal", "paley_zygmund",
                                    "scalar_union_bound", "truncation_pipeline", "mean_identity",
                                    "theorem_main",     "rosenthal_form", "hitczenko"};

void parse_riemann(const Json& j, RiemannOptions& r) {
    if (!j.is_object()) invalid("riemann", "expected an object");
    for (const auto& [key, v] : j.items()) {
        const std::string f = "riemann." + key;
        if (key == "variance_n") r.variance_n = counts(v, f);
        else if (key == "epsilon") r.epsilon = positive(v, f);
        else if (key == "n_max") r.n_max = count(v, f);
        else if (key == "trials_per_n") r.trials_per_n = count(v, f);
        else if (key == "schedule") r.schedule = counts(v, f);
        else if (key == "trajectories") r.trajectories = count(v, f);
        else if (key == "tail_from") r.tail_from = count(v, f);
        else invalid(f, "unknown field");
    }
    for (std::size_t n : r.variance_n)
        if (n == 0) invalid("riemann.variance_n", "entries must be >= 1");
    if (r.n_max == 0 || r.n_max > (std::size_t{1} << 14)) invalid("riemann.n_max", "must lie in 1..16384");
    if (r.trials_per_n == 0) invalid("riemann.trials_per_n", "must be >= 1");
    if (r.trajectories == 0) invalid("riemann.trajectories", "must be >= 1");
    if (r.schedule.empty()) invalid("riemann.schedule", "must not be empty");
    for (std::size_t i = 0; i < r.schedule.size(); ++i)
        if (r.schedule[i] == 0 || (i > 0 && r.schedule[i] <= r.schedule[i - 1]))
            invalid("riemann.schedule", "must be strictly increasing and positive");
    if (r.tail_from > r.schedule.back()) invalid("riemann.tail_from", "lies beyond the schedule");
}

bool has_continuous(const Json& fam) {
    for (const auto& c : fam)
        if (c.is_object() && c.size() == 1 && (c.contains("uniform") || c.contains("pushforward"))) return true;
    return false;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
    if (!j.is_object()) invalid("config", "expected a JSON object");
    ExperimentConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "suite") {
            if (!v.is_string() || !kSuites.count(v.get<std::string>())) invalid("suite", "unknown suite");
            c.suite = v.get<std::string>();
        } else if (key == "norm") {
            if (!v.is_string()) invalid("norm", "expected L1, L2 or LINF");
            wrap("norm", [&] { c.norm = parse_norm(v.get<std::string>()); return 0; });
        } else if (key == "mode") {
            if (!v.is_string()) invalid("mode", "expected EXACT or MONTE_CARLO");
            wrap("mode", [&] { c.mode = parse_mode(v.get<std::string>()); return 0; });
        } else if (key == "trials") {
            c.trials = count(v, "trials");
        } else if (key == "master_seed" || key == "seed") {
            c.master_seed = count(v, key);
        } else if (key == "workers") {
            const auto w = count(v, "workers");
            if (w == 0 || w > 1024) invalid("workers", "must lie in 1..1024");
            c.workers = static_cast<unsigned>(w);
        } else if (key == "level") {
            c.level = number(v, "level");
            if (!(c.level > 0.0 && c.level < 1.0)) invalid("level", "must lie in (0,1)");
        } else if (key == "checks") {
            if (!v.is_array()) invalid("checks", "expected an array of check names");
            for (const auto& name : v) {
                if (!name.is_string() || !kChecks.count(name.get<std::string>()))
                    invalid("checks", "unknown check " + name.dump());
                c.checks.push_back(name.get<std::string>());
            }
        } else if (key == "distribution") {
            parse_component(v, "distribution");
            c.distribution = v;
        } else if (key == "family") {
            if (!v.is_array() || v.empty()) invalid("family", "expected a non-empty array of distributions");
            for (std::size_t i = 0; i < v.size(); ++i) parse_component(v[i], "family[" + std::to_string(i) + "]");
            c.family = v;
        } else if (key == "families") {
            if (!v.is_array() || v.empty()) invalid("families", "expected a non-empty array of families");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_array() || v[i].empty()) invalid("families[" + std::to_string(i) + "]", "expected a family");
                for (std::size_t k = 0; k < v[i].size(); ++k)
                    parse_component(v[i][k], "families[" + std::to_string(i) + "][" + std::to_string(k) + "]");
            }
            c.families = v;
        } else if (key == "cover") {
            parse_distribution(v, "cover");
            c.cover = v;
        } else if (key == "integrand") {
            parse_integrand(v, "integrand");
            c.integrand = v;
        } else if (key == "corpus") {
            if (!v.is_string() || v.get<std::string>() != "theorem") invalid("corpus", "the only corpus is \"theorem\"");
            c.corpus = v.get<std::string>();
        } else if (key == "lambda") {
            c.lambda = numbers(v, "lambda");
        } else if (key == "n") {
            c.n = counts(v, "n");
            if (c.n.empty()) invalid("n", "must not be empty");
            for (std::size_t x : c.n)
                if (x == 0) invalid("n", "entries must be >= 1");
        } else if (key == "L") {
            c.truncation_level = positive(v, "L");
        } else if (key == "c1") {
            c.c1 = positive(v, "c1");
        } else if (key == "eps") {
            c.eps = positive(v, "eps");
        } else if (key == "delta") {
            c.delta = positive(v, "delta");
        } else if (key == "c2") {
            c.c2 = positive(v, "c2");
        } else if (key == "q") {
            c.q = number(v, "q");
        } else if (key == "p") {
            c.p = number(v, "p");
        } else if (key == "riemann") {
            parse_riemann(v, c.riemann);
        } else {
            invalid(key, "unknown field");
        }
    }
    if (!(c.p >= 1.0)) invalid("p", "must be >= 1");
    if (!(c.q >= c.p)) invalid("q", "must be >= p");
    if (c.mode == Mode::Exact) {
        if (c.distribution && has_continuous(Json::array({*c.distribution})))
            invalid("distribution", "EXACT mode rejects continuous laws");
        if (c.family && has_continuous(*c.family)) invalid("family", "EXACT mode rejects continuous laws");
        if (c.families)
            for (const auto& f : *c.families)
                if (has_continuous(f)) invalid("families", "EXACT mode rejects continuous laws");
    }
    if (c.mode == Mode::MonteCarlo && c.trials == 0) invalid("trials", "MONTE_CARLO mode needs trials >= 1");
    if (c.family) {
        const auto fam = wrap("family", [&] {
            std::vector<Component> comps;
            for (std::size_t i = 0; i < c.family->size(); ++i)
                comps.push_back(parse_component((*c.family)[i], "family[" + std::to_string(i) + "]"));
            return ComponentFamily(std::move(comps));
        });
        (void)fam;
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) invalid("config", "cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        invalid("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

Json echo(const ExperimentConfig& c) {
    Json j;
    j["suite"] = c.suite;
    j["norm"] = to_string(c.norm);
    j["mode"] = to_string(c.mode);
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["level"] = c.level;
    j["checks"] = c.checks;
    if (c.distribution) j["distribution"] = *c.distribution;
    if (c.family) j["family"] = *c.family;
    if (c.families) j["families"] = *c.families;
    if (c.cover) j["cover"] = *c.cover;
    if (c.integrand) j["integrand"] = *c.integrand;
    if (c.corpus) j["corpus"] = *c.corpus;
    if (c.lambda) j["lambda"] = *c.lambda;
    j["n"] = c.n;
    if (c.truncation_level) j["L"] = *c.truncation_level;
    j["c1"] = c.c1;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    if (c.c2) j["c2"] = *c.c2;
    j["q"] = c.q;
    j["p"] = c.p;
    Json r;
    r["variance_n"] = c.riemann.variance_n;
    r["epsilon"] = c.riemann.epsilon;
    r["n_max"] = c.riemann.n_max;
    r["trials_per_n"] = c.riemann.trials_per_n;
    r["schedule"] = c.riemann.schedule;
    r["trajectories"] = c.riemann.trajectories;
    r["tail_from"] = c.riemann.tail_from;
    j["riemann"] = r;
    return j;
}

}  // namespace tailgate
