#include "tailgate/report.hpp"

#include <string>

#include "tailgate/error.hpp"

namespace tailgate {

std::string_view to_string(Mode m) noexcept { return m == Mode::Exact ? "EXACT" : "MONTE_CARLO"; }

Mode parse_mode(std::string_view text) {
    if (text == "EXACT" || text == "exact") return Mode::Exact;
    if (text == "MONTE_CARLO" || text == "monte_carlo" || text == "mc") return Mode::MonteCarlo;
    throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(SearchMode m) noexcept {
    return m == SearchMode::Bisection ? "BISECTION" : "DIRECT_RATIO";
}

}  // namespace tailgate
