#include "tvopt/stepper.hpp"

#include <cmath>
#include <string>

#include "tvopt/errors.hpp"

namespace tvopt {

namespace {

void require_finite(const Vector& v, const char* where) {
  if (!v.all_finite()) throw Error(ErrorCode::NonFinite, std::string(where) + " produced a non-finite iterate");
}

}  // namespace

Vector predict(const TimeVaryingObjective& obj, const Vector& x, double t, double h, PredictionMode mode,
               const Vector* prev_grad) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling period must be positive");
  if (x.size() != obj.dimension) throw Error(ErrorCode::DimensionMismatch, "predict: state dimension");

  Vector d;
  switch (mode) {
    case PredictionMode::NoPrediction:
      return x;
    case PredictionMode::ExactTimeDerivative:
      d = obj.time_gradient(x, t);
      break;
    case PredictionMode::BackwardDifference:
      if (prev_grad == nullptr) {
        throw Error(ErrorCode::MissingDerivative, "backward-difference prediction needs the previous gradient");
      }
      d = obj.gradient(x, t) - *prev_grad;
      d *= 1.0 / h;
      break;
  }
  Vector out = x - h * spd_solve(obj.hessian(x, t), d);
  require_finite(out, "prediction");
  return out;
}

Vector correct(const TimeVaryingObjective& obj, const Vector& x_init, double t, const CorrectionMode& mode,
               int tau, const CorrectionOptions& options) {
  if (tau < 1) throw Error(ErrorCode::InvalidArgument, "correction needs tau >= 1");
  if (mode.kind == CorrectionMode::Kind::Gradient && !(mode.gamma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gradient correction needs gamma > 0");
  }
  if (x_init.size() != obj.dimension) throw Error(ErrorCode::DimensionMismatch, "correct: state dimension");

  Vector x = x_init;
  for (int s = 0; s < tau; ++s) {
    const Vector g = obj.gradient(x, t);
    Vector step = mode.kind == CorrectionMode::Kind::Gradient ? mode.gamma * g : spd_solve(obj.hessian(x, t), g);

    if (options.backtracking) {
      const bool by_value = mode.kind == CorrectionMode::Kind::Gradient && static_cast<bool>(obj.value);
      const double ref = by_value ? obj.value(x, t) : norm(g);
      auto merit = [&](const Vector& y) { return by_value ? obj.value(y, t) : norm(obj.gradient(y, t)); };
      double alpha = 1.0;
      for (int i = 0; i < 50; ++i) {
        const double trial = merit(x - alpha * step);
        if (std::isfinite(trial) && trial <= ref) break;
        alpha *= 0.5;
      }
      step *= alpha;
    }

    x -= step;
    require_finite(x, "correction");
  }
  return x;
}

}  // namespace tvopt
