#include "tvopt/errors.hpp"

#include <iostream>
#include <mutex>

namespace tvopt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingConstants: return "MissingConstants";
    case ErrorCode::MissingDerivative: return "MissingDerivative";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidHybridC: return "InvalidHybridC";
    case ErrorCode::InadmissibleRegime: return "InadmissibleRegime";
    case ErrorCode::QuadraticProblem: return "QuadraticProblem";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return h;
}

}  // namespace

void set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex());
  handler() = std::move(h);
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler()) handler()(message);
}

}  // namespace tvopt
