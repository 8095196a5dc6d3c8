#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "tvopt/linalg.hpp"

namespace tvopt {

/// Bounds on the objective's derivatives, valid over the region of interest.
///
///   m  : lower bound on the spectrum of ∇ₓₓf (strong convexity)
///   L  : upper bound on ‖∇ₓₓf‖
///   C0 : bound on ‖∇ₜₓf‖, the drift of the gradient (units/s)
///   C1 : bound on ‖∇ₓₓₓf‖, i.e. the Hessian's Lipschitz constant in x
///   C2 : bound on ‖∇ₓₜₓf‖, the time derivative of the Hessian
///   C3 : bound on ‖∇ₜₜₓf‖ (units/s²)
struct SmoothnessConstants {
  double m = 1.0;
  double L = 1.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;

  /// Throws Error(InvalidArgument) unless 0 < m <= L and all C_i >= 0.
  void validate() const;
};

using ScalarField = std::function<double(const Vector&, double)>;
using VectorField = std::function<Vector(const Vector&, double)>;
using MatrixField = std::function<SymMatrix(const Vector&, double)>;

/// How the prediction step obtains ∇ₜₓf.
enum class DerivativeMode { Analytic, ApproxTimeDerivative };

/// A time-varying objective f(x; t) together with the derivatives the
/// tracking algorithms consume. Immutable after construction; evaluators must
/// be pure so the object can be shared across threads.
struct TimeVaryingObjective {
  std::size_t dimension = 0;
  ScalarField value;
  VectorField gradient;
  MatrixField hessian;
  VectorField mixed_tx;   // ∇ₜₓf, optional
  VectorField mixed_ttx;  // ∇ₜₜₓf, optional
  std::optional<SmoothnessConstants> constants;

  bool has_mixed_tx() const noexcept { return static_cast<bool>(mixed_tx); }
  bool has_mixed_ttx() const noexcept { return static_cast<bool>(mixed_ttx); }

  /// ∇ₜₓf(x; t); throws Error(MissingDerivative) if the objective has none.
  Vector time_gradient(const Vector& x, double t) const;
  const SmoothnessConstants& require_constants() const;
};

/// First-order backward difference of the gradient in time,
/// (∇ₓf(x; t) − ∇ₓf(x; t_prev)) / (t − t_prev).
Vector fd_time_gradient(const TimeVaryingObjective& obj, const Vector& x, double t, double t_prev);

/// Axis-aligned box in x crossed with a time interval.
struct SampleRegion {
  Vector lower;
  Vector upper;
  double t_min = 0.0;
  double t_max = 0.0;
};

/// Worst observed derivative magnitudes over the sampled region and the margin
/// left by each claimed constant (negative margin = violation).
struct AssumptionReport {
  std::size_t samples = 0;
  double observed_min_eig = 0.0;
  double observed_max_eig = 0.0;
  double observed_C0 = 0.0;
  double observed_C1 = 0.0;
  double observed_C2 = 0.0;
  double observed_C3 = 0.0;

  double margin_m = 0.0;
  double margin_L = 0.0;
  double margin_C0 = 0.0;
  double margin_C1 = 0.0;
  double margin_C2 = 0.0;
  double margin_C3 = 0.0;

  /// True when every margin is >= -tol · max(1, |claimed constant|).
  bool holds(const SmoothnessConstants& claimed, double rel_tol = 1e-6) const;
};

/// Samples the region at n_samples Halton points and compares observed
/// Hessian spectrum and derivative norms with obj.constants. Third-order and
/// mixed derivatives that the objective does not provide analytically are
/// taken by central differences.
AssumptionReport check_assumptions(const TimeVaryingObjective& obj, const SampleRegion& region,
                                   std::size_t n_samples);

/// Point i (0-based) of the Halton sequence in `dims` dimensions, in [0,1)^dims.
std::vector<double> halton_point(std::size_t index, std::size_t dims);

}  // namespace tvopt
