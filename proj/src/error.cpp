#include "splnc/error.hpp"

namespace splnc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonFiniteInput: return "NonFiniteInput";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::DegenerateSpan: return "DegenerateSpan";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateProblem: return "DegenerateProblem";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonPositivePace: return "NonPositivePace";
        case ErrorCode::TooFewClasses: return "TooFewClasses";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::SingularCenter: return "SingularCenter";
        case ErrorCode::BadSimilarity: return "BadSimilarity";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::FractionTooLargeForClass: return "FractionTooLargeForClass";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::UnknownPredictedClass: return "UnknownPredictedClass";
        case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
        case ErrorCode::PaletteTooSmall: return "PaletteTooSmall";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace splnc
