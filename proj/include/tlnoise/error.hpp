#pragma once

#include <stdexcept>
#include <string>

namespace tlnoise {

enum class ErrorCode {
    InvalidArgument,
    ResonancePole,
    UnmatchedSource,
    UnmatchedJ1,
    DegenerateSource,
    NonPositiveArgument,
    ZeroReference,
    InsufficientData,
    ParseError,
    ValidationError,
    FormatError,
    NonMonotonicFrequency,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// C layer can map it onto a status value without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace tlnoise
