#include "errors.hpp"

namespace holowave {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NegativeOrder: return "NegativeOrder";
    case ErrorCode::InsufficientOrder: return "InsufficientOrder";
    case ErrorCode::ParameterOrder: return "ParameterOrder";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::SignChange: return "SignChange";
    case ErrorCode::IndexBudget: return "IndexBudget";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotAAdS: return "NotAAdS";
    case ErrorCode::SeriesOrderTooLow: return "SeriesOrderTooLow";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotSmallEnough: return "NotSmallEnough";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::NaNDetected: return "NaNDetected";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::DerivativeBudget: return "DerivativeBudget";
    case ErrorCode::ZeroResidual: return "ZeroResidual";
    case ErrorCode::DepthTooShallow: return "DepthTooShallow";
    case ErrorCode::ExponentTooSmall: return "ExponentTooSmall";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::MissingReport: return "MissingReport";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace holowave
