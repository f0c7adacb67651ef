#include "bondopt/error.hpp"

namespace bondopt {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::PoleOnWrongSide: return "PoleOnWrongSide";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::DegenerateMaturity: return "DegenerateMaturity";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::UnstableFit: return "UnstableFit";
        case ErrorCode::PoleOnCircle: return "PoleOnCircle";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::RootOnCircle: return "RootOnCircle";
        case ErrorCode::NonPositiveSymbol: return "NonPositiveSymbol";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::ZeroNetPosition: return "ZeroNetPosition";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonMonotoneTenors: return "NonMonotoneTenors";
        case ErrorCode::DuplicateDate: return "DuplicateDate";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::GridOutOfRange: return "GridOutOfRange";
        case ErrorCode::InsufficientDates: return "InsufficientDates";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::ParseError:
        case ErrorCode::NonMonotoneTenors:
        case ErrorCode::DuplicateDate:
        case ErrorCode::EmptyInput:
        case ErrorCode::GridOutOfRange:
        case ErrorCode::InsufficientDates:
        case ErrorCode::WindowTooShort:
        case ErrorCode::ConfigError:
        case ErrorCode::IoError:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bondopt
