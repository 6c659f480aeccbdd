#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailgate/distribution.hpp"
#include "tailgate/integrand.hpp"
#include "tailgate/report.hpp"

namespace tailgate {

using Json = nlohmann::ordered_json;

// Literal parsers. Distributions:
//   {"atoms": [{"point": [x, ...] | x, "prob": p}, ...]}
//   {"delta": [x, ...] | x}
//   {"rademacher": dim}
//   {"uniform": [a, b]}
//   {"pushforward": {"integrand": <integrand>, "a": a, "b": b}}
// Integrands: {"polynomial": [c0, c1, ...]}, {"step": {"breakpoints": [...],
// "values": [...]}}, {"power": {"alpha": a, "scale": s}}.
// Errors are CONFIG_INVALID and name the offending field.
Component parse_component(const Json& j, const std::string& field);
FiniteDistribution parse_distribution(const Json& j, const std::string& field);
IntegrandSpec parse_integrand(const Json& j, const std::string& field);

struct RiemannOptions {
    std::vector<std::size_t> variance_n{4, 16, 64};
    double epsilon = 0.05;
    std::size_t n_max = 256;
    std::uint64_t trials_per_n = 256;
    std::vector<std::size_t> schedule{16, 32, 64, 128, 256, 512, 1024};
    std::size_t trajectories = 200;
    std::size_t tail_from = 256;
};

struct ExperimentConfig {
    std::string suite;
    NormKind norm = NormKind::L2;
    Mode mode = Mode::Exact;
    std::uint64_t trials = 100'000;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    double level = 0.99;
    std::vector<std::string> checks;  // empty: every check the instance supports

    // Instance literals, kept verbatim for the echo.
    std::optional<Json> distribution;
    std::optional<Json> family;
    std::optional<Json> families;
    std::optional<Json> cover;
    std::optional<Json> integrand;
    std::optional<std::string> corpus;  // "theorem"

    std::optional<std::vector<double>> lambda;
    std::vector<std::size_t> n{3};  // counterexample sizes, also n for i.i.d. checks

    std::optional<double> truncation_level;
    double c1 = 1.0;
    double eps = 0.01;
    double delta = 0.01;
    std::optional<double> c2;
    double q = 4.0;
    double p = 2.0;

    RiemannOptions riemann;
};

// Strict parse: unknown keys and out-of-range values raise CONFIG_INVALID.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
// Effective configuration with every default filled in; workers are left
// out because they do not affect results.
Json echo(const ExperimentConfig& c);

}  // namespace tailgate
