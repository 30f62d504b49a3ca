#ifndef HOLOWAVE_ERRORS_HPP
#define HOLOWAVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holowave {

// Stable machine-readable error codes. These are mirrored one-to-one by the
// hw_status values of the public C API and by the "error_code" field of
// summary.json, so renumbering is a breaking change.
enum class ErrorCode : int {
  Ok = 0,
  BelowThreshold = 1,
  GridMismatch = 2,
  NegativeOrder = 3,
  InsufficientOrder = 4,
  ParameterOrder = 5,
  EmptyWindow = 6,
  SignChange = 7,
  IndexBudget = 8,
  DomainError = 9,
  NotAAdS = 10,
  SeriesOrderTooLow = 11,
  SingularSystem = 12,
  NotSmallEnough = 13,
  ConvergenceFailure = 14,
  CFLViolation = 15,
  NaNDetected = 16,
  InsufficientHistory = 17,
  DerivativeBudget = 18,
  ZeroResidual = 19,
  DepthTooShallow = 20,
  ExponentTooSmall = 21,
  NoContraction = 22,
  MaxIterExceeded = 23,
  ConfigParse = 24,
  ValidationFailed = 25,
  MissingReport = 26,
  IoError = 27,
  Internal = 28,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace holowave

#endif
