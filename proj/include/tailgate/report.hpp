#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tailgate {

enum class Mode { Exact, MonteCarlo };

std::string_view to_string(Mode m) noexcept;
Mode parse_mode(std::string_view text);

inline constexpr double kExactTolerance = 1e-9;

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Named scalar quantities in a fixed order; the order is part of the
// canonical serialisation.
using Record = std::vector<std::pair<std::string, double>>;

// Outcome of a single inequality check.
//
// EXACT mode: pass iff margin >= -1e-9.
// MONTE_CARLO mode: pass iff lhs_ci.low <= rhs_ci.high at every grid point.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs at the tightest point
    Mode mode = Mode::Exact;
    bool pass = false;
    std::optional<Interval> lhs_ci;
    std::optional<Interval> rhs_ci;
    Record values;                // auxiliary quantities
    std::vector<Record> details;  // per-grid-point table
};

enum class SearchMode { Bisection, DirectRatio };

std::string_view to_string(SearchMode m) noexcept;

struct ConstantEstimate {
    std::string constant_name;
    double value = 0.0;
    std::vector<double> lambda_grid;
    SearchMode search_mode = SearchMode::Bisection;
    double tolerance = 0.0;
    Mode mode = Mode::Exact;
    // Monte Carlo only: bracket obtained from simultaneous confidence bounds.
    std::optional<Interval> bracket;
    Record values;
};

}  // namespace tailgate
