#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsxfer {

/// Failure kinds raised by the library. The grouping comments mirror the
/// exit-status class each code maps to in the command-line tool.
enum class Errc {
    // usage / configuration
    ConfigInvalid,
    InvalidArgument,
    // data
    MissingColumn,
    NonFiniteValue,
    DuplicateIndex,
    EmptyFile,
    SeriesTooShort,
    HorizonExceedsTest,
    FeatureSetMismatch,
    NotStandardized,
    MissingForecast,
    MissingQuantile,
    InsufficientPoints,
    NoOverlap,
    UpstreamMissing,
    IoFailure,
    // numeric
    ZeroVarianceDataset,
    SingleSource,
    TooFewFeatures,
    DegenerateX,
    EmptyInput,
};

std::string_view errc_name(Errc code) noexcept;

/// Status class used for process exit codes and the C API.
enum class ErrorClass { Usage = 1, Data = 2, Numeric = 3 };

ErrorClass error_class(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace tsxfer
