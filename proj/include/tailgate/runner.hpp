#pragma once

#include <string>

#include "tailgate/config.hpp"

namespace tailgate {

inline constexpr const char* kVersion = "tailgate 0.1.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitConfig = 2, kExitInternal = 3 };

struct RunReport {
    Json report;         // canonical JSON: config echo, results, version, seed
    std::string csv;     // table for the suite, header row and LF endings
    bool pass = false;
    double wall_seconds = 0.0;  // kept out of the canonical report
};

RunReport run(const ExperimentConfig& config);

// Canonical text of a report: two-space indent, shortest round-trip numbers,
// trailing newline.
std::string canonical(const Json& report);

struct ReplayResult {
    bool identical = false;
    std::size_t first_difference_line = 0;  // 1-based, 0 when identical
    std::string expected_line;
    std::string actual_line;
};

// Re-executes the config echoed in `report_text` and compares the canonical text.
ReplayResult replay(const std::string& report_text, unsigned workers = 1);

int exit_code_for(ErrorCode code);

}  // namespace tailgate
