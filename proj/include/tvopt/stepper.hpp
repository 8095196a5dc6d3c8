#pragma once

#include "tvopt/objective.hpp"

namespace tvopt {

enum class PredictionMode { ExactTimeDerivative, BackwardDifference, NoPrediction };

/// Gradient steps with stepsize gamma, or pure Newton steps.
struct CorrectionMode {
  enum class Kind { Gradient, Newton };
  Kind kind = Kind::Gradient;
  double gamma = 0.0;

  static CorrectionMode gradient(double gamma) { return {Kind::Gradient, gamma}; }
  static CorrectionMode newton() { return {Kind::Newton, 0.0}; }
};

struct CorrectionOptions {
  /// Halve each step until it does not increase f (gradient, when a value is
  /// available) or ‖∇ₓf‖ (Newton). Off by default: the pure steps are what the
  /// error bounds describe.
  bool backtracking = false;
};

/// x_{k+1|k} = x_k − h [∇ₓₓf(x_k; t_k)]⁻¹ d with d = ∇ₜₓf(x_k; t_k) (exact) or
/// (∇ₓf(x_k; t_k) − prev_grad) / h (backward difference). prev_grad must be
/// ∇ₓf(x_k; t_k − h) in backward mode; it is ignored otherwise.
Vector predict(const TimeVaryingObjective& obj, const Vector& x, double t, double h, PredictionMode mode,
               const Vector* prev_grad = nullptr);

/// τ correction steps on f(·; t) starting from x_init.
Vector correct(const TimeVaryingObjective& obj, const Vector& x_init, double t, const CorrectionMode& mode,
               int tau, const CorrectionOptions& options = {});

}  // namespace tvopt
