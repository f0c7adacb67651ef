#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bondopt {

/// Failure categories raised by the library. Names match the error kinds
/// reported on the command line.
enum class ErrorCode {
    InvalidArgument,
    PoleOnWrongSide,
    ConvergenceFailure,
    InsufficientData,
    DegenerateMaturity,
    SingularSystem,
    UnstableFit,
    PoleOnCircle,
    NotNormalized,
    RootOnCircle,
    NonPositiveSymbol,
    SingularMatrix,
    NonPositiveVariance,
    ZeroNetPosition,
    ParseError,
    NonMonotoneTenors,
    DuplicateDate,
    EmptyInput,
    GridOutOfRange,
    InsufficientDates,
    WindowTooShort,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// True for input/configuration problems (bad files, bad flags), false for
/// failures that arise inside a numerical stage.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace bondopt
