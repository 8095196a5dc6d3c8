#pragma once

#include <vector>

#include "tvopt/objective.hpp"

namespace tvopt {

/// Absolute floor used for measured errors: the oracle does not resolve
/// anything smaller.
inline constexpr double kOracleTolerance = 1e-13;

struct OracleOptions {
  double tolerance = kOracleTolerance;
  int max_iterations = 200;
};

/// Solves ∇ₓf(x; t) = 0 by Newton's method with step halving whenever a full
/// step would increase ‖∇ₓf‖. Stops once ‖∇ₓf‖ ≤ tol · max(1, ‖∇ₓf(warm_start; t)‖)
/// or the Newton step is at rounding level.
/// Throws Error(NoConvergence) after max_iterations.
Vector optimal_point(const TimeVaryingObjective& obj, double t, const Vector& warm_start,
                     const OracleOptions& options = {});

/// x*(t0 + k h) for k = 0..K, each solve warm-started from the previous one.
std::vector<Vector> optimal_trajectory(const TimeVaryingObjective& obj, double t0, double h, std::size_t K,
                                       const Vector& warm_start, const OracleOptions& options = {});

/// Integrates ẋ = −[∇ₓₓf]⁻¹ ∇ₜₓf from (x_start, t_start) over [t_start, t_start + h]
/// with classical RK4 on `substeps` equal substeps (at least 100).
Vector continuous_flow(const TimeVaryingObjective& obj, const Vector& x_start, double t_start, double h,
                       int substeps = 100);

/// Stateful x*(t) evaluator for one run: each call warm-starts from the
/// previous answer. Not shareable across threads.
class TrajectoryOracle {
 public:
  TrajectoryOracle(const TimeVaryingObjective& obj, Vector warm_start, OracleOptions options = {});

  Vector operator()(double t);

 private:
  const TimeVaryingObjective* obj_;
  Vector last_;
  OracleOptions options_;
};

}  // namespace tvopt
