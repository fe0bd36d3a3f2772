#pragma once

#include <stdexcept>
#include <string>

namespace bfmeta {

// Broad class of a failure; the CLI maps these onto exit codes 2/3/4.
enum class ErrorKind { Config, Data, Numerical };

enum class ErrorCode {
    // data
    EmptyDataset,
    NonPositiveSE,
    NonFiniteValue,
    DuplicateId,
    InvalidSampleSize,
    MissingYear,
    MissingSampleSizes,
    TooFewStudies,
    Io,
    // configuration / contract
    ConfigParse,
    InvalidArgument,
    InvalidPrior,
    NoDefaultForScale,
    MissingContext,
    OutsideSupport,
    ImproperUnderBMA,
    ImproperPrior,
    PriorNotIndependent,
    ConstantMismatch,
    InvalidModel,
    InvalidAlpha,
    OutOfRange,
    // numerical
    NonPositiveVariance,
    QuadratureNotConverged,
    NonFiniteMarginal,
    DegenerateWeights,
    FitDiverged,
    NoConvergence,
};

const char* to_string(ErrorCode code) noexcept;
ErrorKind kind_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }

private:
    ErrorCode code_;
};

}  // namespace bfmeta
