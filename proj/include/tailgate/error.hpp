#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailgate {

enum class ErrorCode {
    InvalidVector,
    DimMismatch,
    EvalFailure,
    SupportOverflow,
    BoundViolation,
    ZeroMean,
    Infeasible,
    InvalidArgument,
    ConfigInvalid,
    Mismatch,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every library failure is reported through this one exception type; the
// code is what callers (and the CLI exit-status mapping) branch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tailgate
