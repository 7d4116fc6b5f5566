#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace splnc {

enum class ErrorCode {
    NonFiniteInput,
    NotPSD,
    DegenerateSpan,
    EmptyInput,
    DimensionMismatch,
    DegenerateProblem,
    InvalidModel,
    InvalidArgument,
    NonPositivePace,
    TooFewClasses,
    EmptyClass,
    SingularCenter,
    BadSimilarity,
    NotPositiveDefinite,
    FractionTooLargeForClass,
    ShapeMismatch,
    UnknownPredictedClass,
    EmptyEvaluation,
    PaletteTooSmall,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers and tests can branch on the condition rather than the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace splnc
