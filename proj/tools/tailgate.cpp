#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tailgate/error.hpp"
#include "tailgate/runner.hpp"

namespace {

using namespace tailgate;

struct Flags {
    std::string config;
    std::optional<std::string> seed;
    std::optional<std::int64_t> trials;
    std::optional<std::int64_t> workers;
    std::string out;
    std::string format = "json";
};

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
        v = std::stoull(text, &used, 0);
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigInvalid, field + ": expected an unsigned 64-bit integer, got '" + text + "'");
    }
    if (used != text.size())
        throw Error(ErrorCode::ConfigInvalid, field + ": expected an unsigned 64-bit integer, got '" + text + "'");
    return v;
}

void write(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigInvalid, "out: cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path, const std::string& field) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigInvalid, field + ": cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_suite(const std::string& suite, const Flags& f) {
    if (f.config.empty()) throw Error(ErrorCode::ConfigInvalid, "config: --config is required");
    ExperimentConfig c = load_config(f.config);
    if (!c.suite.empty() && c.suite != suite)
        throw Error(ErrorCode::ConfigInvalid, "suite: config says '" + c.suite + "' but subcommand is '" + suite + "'");
    c.suite = suite;
    if (const char* env = std::getenv("TAILGATE_SEED")) c.master_seed = parse_u64(env, "TAILGATE_SEED");
    if (f.seed) c.master_seed = parse_u64(*f.seed, "seed");
    if (f.trials) {
        if (*f.trials < 0) throw Error(ErrorCode::ConfigInvalid, "trials: must be a non-negative integer");
        c.trials = static_cast<std::uint64_t>(*f.trials);
    }
    if (f.workers) {
        if (*f.workers < 1 || *f.workers > 1024) throw Error(ErrorCode::ConfigInvalid, "workers: must lie in 1..1024");
        c.workers = static_cast<unsigned>(*f.workers);
    }
    if (c.mode == Mode::MonteCarlo && c.trials == 0)
        throw Error(ErrorCode::ConfigInvalid, "trials: MONTE_CARLO mode needs trials >= 1");

    const RunReport r = run(c);
    write(f.format == "csv" ? r.csv : canonical(r.report), f.out);
    std::cerr << suite << ": " << (r.pass ? "PASS" : "FAIL") << " in " << r.wall_seconds << " s\n";
    return r.pass ? kExitPass : kExitCheckFailed;
}

int run_replay(const std::string& path, const Flags& f) {
    const unsigned workers = f.workers ? static_cast<unsigned>(std::max<std::int64_t>(1, *f.workers)) : 1;
    const auto res = replay(read_file(path, "report"), workers);
    if (res.identical) {
        std::cerr << "replay: identical\n";
        return kExitPass;
    }
    std::cerr << "MISMATCH at line " << res.first_difference_line << "\n  expected: " << res.expected_line
              << "\n  actual:   " << res.actual_line << "\n";
    return kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail comparison inequalities for sums of regularly covering random vectors"};
    app.require_subcommand(1);
    Flags flags;
    std::string report_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "experiment config (JSON)");
        sub->add_option("--seed", flags.seed, "master seed (overrides TAILGATE_SEED and the config)");
        sub->add_option("--trials", flags.trials, "Monte Carlo trials");
        sub->add_option("--workers", flags.workers, "worker threads (results do not depend on it)");
        sub->add_option("--out", flags.out, "output path (default stdout)");
        sub->add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    const std::vector<std::pair<std::string, std::string>> suites{
        {"check", "run inequality checks on an instance"},
        {"min-c", "minimal constant of the tail comparison"},
        {"counterexample", "converse counterexample"},
        {"riemann", "randomly sampled Riemann sums"},
        {"cover-verify", "verify a regular covering"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : suites) {
        subs.push_back(app.add_subcommand(name, help));
        add_common(subs.back());
    }
    auto* rep = app.add_subcommand("replay", "re-run a report and byte-compare");
    rep->add_option("report", report_path, "report JSON")->required();
    rep->add_option("--workers", flags.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (rep->parsed()) return run_replay(report_path, flags);
        for (auto* s : subs)
            if (s->parsed()) return run_suite(s->get_name(), flags);
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "tailgate: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "tailgate: INTERNAL: " << e.what() << "\n";
        return kExitInternal;
    }
}
