#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geodesy {

/// Failure categories raised by the library. Each value names one distinct
/// geometric or numerical failure so callers (and the CLI exit-code mapping)
/// can branch on it without parsing messages.
enum class ErrorCode {
    InvalidArgument,
    CollinearInput,
    TooFewPoints,
    DegenerateSource,
    CoincidentPoints,
    BasePoint,
    NonUniqueProfile,
    TangentLine,
    NonUnitChart,
    TangentCircles,
    OnCriticalCircle,
    ParallelLines,
    DegenerateSubset,
    InconsistentAngles,
    CollinearTriple,
    NoSolutionFound,
    ValidationFailed,
    Cocircular,
    OnExceptionalCurve,
    QuotientNotSign,
    InvalidShape,
    UnplottableReport,
    InvalidInput,
};

std::string_view to_string(ErrorCode code);

class GeodesyError : public std::runtime_error {
public:
    GeodesyError(ErrorCode code, const std::string& message, int detail = 0)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          detail_(detail) {}

    ErrorCode code() const noexcept { return code_; }

    // Extra integer payload; NonUniqueProfile stores the nullspace dimension.
    int detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    int detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message, int detail = 0) {
    throw GeodesyError(code, message, detail);
}

}  // namespace geodesy
