#include "tlnoise/error.hpp"

namespace tlnoise {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ResonancePole: return "ResonancePole";
        case ErrorCode::UnmatchedSource: return "UnmatchedSource";
        case ErrorCode::UnmatchedJ1: return "UnmatchedJ1";
        case ErrorCode::DegenerateSource: return "DegenerateSource";
        case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
        case ErrorCode::ZeroReference: return "ZeroReference";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::NonMonotonicFrequency: return "NonMonotonicFrequency";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace tlnoise
