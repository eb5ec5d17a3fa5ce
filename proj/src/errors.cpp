#include "geodesy/errors.hpp"

namespace geodesy {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::CollinearInput: return "CollinearInput";
        case ErrorCode::TooFewPoints: return "TooFewPoints";
        case ErrorCode::DegenerateSource: return "DegenerateSource";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::BasePoint: return "BasePoint";
        case ErrorCode::NonUniqueProfile: return "NonUniqueProfile";
        case ErrorCode::TangentLine: return "TangentLine";
        case ErrorCode::NonUnitChart: return "NonUnitChart";
        case ErrorCode::TangentCircles: return "TangentCircles";
        case ErrorCode::OnCriticalCircle: return "OnCriticalCircle";
        case ErrorCode::ParallelLines: return "ParallelLines";
        case ErrorCode::DegenerateSubset: return "DegenerateSubset";
        case ErrorCode::InconsistentAngles: return "InconsistentAngles";
        case ErrorCode::CollinearTriple: return "CollinearTriple";
        case ErrorCode::NoSolutionFound: return "NoSolutionFound";
        case ErrorCode::ValidationFailed: return "ValidationFailed";
        case ErrorCode::Cocircular: return "Cocircular";
        case ErrorCode::OnExceptionalCurve: return "OnExceptionalCurve";
        case ErrorCode::QuotientNotSign: return "QuotientNotSign";
        case ErrorCode::InvalidShape: return "InvalidShape";
        case ErrorCode::UnplottableReport: return "UnplottableReport";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace geodesy
