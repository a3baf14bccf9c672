#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csw {

enum class ErrorCode {
    ArityMismatch,
    ConstraintViolation,
    NotInScheme,
    RankZero,
    LengthMismatch,
    NotDelta,
    PatternOutOfRange,
    DimensionMismatch,
    NotInSpan,
    HomeMismatch,
    ParameterOutOfRange,
    EmptyFamily,
    WrongSpaceKind,
    CaptureUnavailable,
    ConfigInvalid,
    NotBiorthogonal,
    Parse,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace csw
