#pragma once

#include <functional>
#include <optional>

#include "tvopt/objective.hpp"

namespace tvopt {

// Scalar logistic-tracking problem
//   f(x; t) = ½(x − cos ωt)² + κ log(1 + exp(μx))
struct ScalarProblemParams {
  double omega = 0.02 * 3.14159265358979323846;  // rad/s
  double kappa = 7.5;
  double mu = 1.75;

  void validate() const;
};

/// Closed-form smoothness constants of the scalar problem (valid for all x, t).
SmoothnessConstants scalar_problem_constants(const ScalarProblemParams& p);

TimeVaryingObjective make_scalar_problem(const ScalarProblemParams& params);

/// A time-parametrized curve with optional analytic first and second
/// derivatives. Used both as a reference path and as a quadratic drift.
struct Curve {
  std::function<Vector(double)> position;
  std::function<Vector(double)> velocity;      // optional
  std::function<Vector(double)> acceleration;  // optional
};

using ReferencePath = Curve;

/// y(t) = 100 [cos ωt, sin 3ωt] m.
ReferencePath lissajous_reference_path(double omega);

// Planar target tracking with a base-station penalty
//   f(x; t) = ½(‖x − y(t)‖² + μ₁ exp(μ₂‖x − b‖²))
struct TrackingProblemParams {
  double mu1 = 1000.0;  // m²
  double mu2 = 0.005;   // m⁻²
  Vector base{100.0, 100.0};
  double omega = 0.01;  // rad/s
  Vector domain_lower{-150.0, -150.0};
  Vector domain_upper{150.0, 150.0};
  /// Constants attached to the objective. Defaults to the published values
  /// for the default parameters; they are not re-derived.
  std::optional<SmoothnessConstants> constants = SmoothnessConstants{1.01, 3.45, 3.16, 0.06, 0.0, 0.10};

  void validate() const;
};

TimeVaryingObjective make_tracking_problem(const TrackingProblemParams& params, const ReferencePath& path);

/// f(x; t) = ½‖x − d(t)‖². C0 and C3 are sup‖ḋ‖ and sup‖d̈‖ over [0, horizon],
/// found by dense sampling when the drift has analytic derivatives.
TimeVaryingObjective make_quadratic_problem(std::size_t n, const Curve& drift, double horizon);

/// d(t) = offset + rate · t
Curve linear_drift(Vector offset, Vector rate);
/// d_i(t) = amplitude_i · sin(frequency · t)
Curve sine_drift(Vector amplitude, double frequency);

}  // namespace tvopt
