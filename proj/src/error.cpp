#include "bfmeta/error.hpp"

namespace bfmeta {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::NonPositiveSE: return "NonPositiveSE";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::InvalidSampleSize: return "InvalidSampleSize";
        case ErrorCode::MissingYear: return "MissingYear";
        case ErrorCode::MissingSampleSizes: return "MissingSampleSizes";
        case ErrorCode::TooFewStudies: return "TooFewStudies";
        case ErrorCode::Io: return "Io";
        case ErrorCode::ConfigParse: return "ConfigParse";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidPrior: return "InvalidPrior";
        case ErrorCode::NoDefaultForScale: return "NoDefaultForScale";
        case ErrorCode::MissingContext: return "MissingContext";
        case ErrorCode::OutsideSupport: return "OutsideSupport";
        case ErrorCode::ImproperUnderBMA: return "ImproperUnderBMA";
        case ErrorCode::ImproperPrior: return "ImproperPrior";
        case ErrorCode::PriorNotIndependent: return "PriorNotIndependent";
        case ErrorCode::ConstantMismatch: return "ConstantMismatch";
        case ErrorCode::InvalidModel: return "InvalidModel";
        case ErrorCode::InvalidAlpha: return "InvalidAlpha";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::NonFiniteMarginal: return "NonFiniteMarginal";
        case ErrorCode::DegenerateWeights: return "DegenerateWeights";
        case ErrorCode::FitDiverged: return "FitDiverged";
        case ErrorCode::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyDataset:
        case ErrorCode::NonPositiveSE:
        case ErrorCode::NonFiniteValue:
        case ErrorCode::DuplicateId:
        case ErrorCode::InvalidSampleSize:
        case ErrorCode::MissingYear:
        case ErrorCode::MissingSampleSizes:
        case ErrorCode::TooFewStudies:
        case ErrorCode::Io:
            return ErrorKind::Data;
        case ErrorCode::NonPositiveVariance:
        case ErrorCode::QuadratureNotConverged:
        case ErrorCode::NonFiniteMarginal:
        case ErrorCode::DegenerateWeights:
        case ErrorCode::FitDiverged:
        case ErrorCode::NoConvergence:
            return ErrorKind::Numerical;
        default:
            return ErrorKind::Config;
    }
}

}  // namespace bfmeta
