#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tvopt {

enum class ErrorCode {
  NotPositiveDefinite,
  DimensionMismatch,
  InvalidArgument,
  MissingConstants,
  MissingDerivative,
  DegenerateInterval,
  NonFinite,
  NoConvergence,
  Infeasible,
  InvalidHybridC,
  InadmissibleRegime,
  QuadraticProblem,
  TooShort,
  NonPositive,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as tvopt::Error; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// Diagnostics sink for non-fatal warnings (e.g. a stepsize outside the
// guaranteed range). Defaults to stderr; pass an empty function to silence.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace tvopt
