#include "tvopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvopt/errors.hpp"

namespace tvopt {

Vector optimal_point(const TimeVaryingObjective& obj, double t, const Vector& warm_start,
                     const OracleOptions& options) {
  if (warm_start.size() != obj.dimension) throw Error(ErrorCode::DimensionMismatch, "oracle warm start");
  Vector x = warm_start;
  Vector g = obj.gradient(x, t);
  if (!g.all_finite()) throw Error(ErrorCode::NonFinite, "gradient at the warm start is not finite");
  const double target = options.tolerance * std::max(1.0, norm(g));
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int it = 0; it < options.max_iterations; ++it) {
    const double gn = norm(g);
    const Vector step = spd_solve(obj.hessian(x, t), g);
    // The target is relative to a possibly far warm start, so also require
    // the remaining Newton step to be negligible.
    if (gn <= target && norm(step) <= 1e-8 * std::max(1.0, norm(x))) {
      const Vector polished = x - step;
      const Vector gp = obj.gradient(polished, t);
      return gp.all_finite() && norm(gp) <= gn ? polished : x;
    }

    double alpha = 1.0;
    Vector trial = x - step;
    Vector gt = obj.gradient(trial, t);
    while (!(gt.all_finite() && norm(gt) <= gn) && alpha > 1e-12) {
      alpha *= 0.5;
      trial = x - alpha * step;
      gt = obj.gradient(trial, t);
    }
    const double moved = alpha * norm(step);
    x = std::move(trial);
    g = std::move(gt);
    // A step below rounding level cannot improve the gradient further.
    if (moved <= 8.0 * eps * std::max(1.0, norm(x))) {
      if (g.all_finite() && norm(g) <= std::max(target, 1e-9 * std::max(1.0, norm(x)))) return x;
    }
  }
  if (g.all_finite() && norm(g) <= target) return x;
  throw Error(ErrorCode::NoConvergence, "optimal_point did not converge at t = " + std::to_string(t));
}

std::vector<Vector> optimal_trajectory(const TimeVaryingObjective& obj, double t0, double h, std::size_t K,
                                       const Vector& warm_start, const OracleOptions& options) {
  std::vector<Vector> out;
  out.reserve(K + 1);
  Vector x = warm_start;
  for (std::size_t k = 0; k <= K; ++k) {
    x = optimal_point(obj, t0 + static_cast<double>(k) * h, x, options);
    out.push_back(x);
  }
  return out;
}

Vector continuous_flow(const TimeVaryingObjective& obj, const Vector& x_start, double t_start, double h,
                       int substeps) {
  if (substeps < 100) throw Error(ErrorCode::InvalidArgument, "continuous_flow needs at least 100 substeps");
  auto rhs = [&obj](const Vector& x, double t) { return -1.0 * spd_solve(obj.hessian(x, t), obj.time_gradient(x, t)); };
  const double dt = h / substeps;
  Vector x = x_start;
  for (int i = 0; i < substeps; ++i) {
    const double t = t_start + i * dt;
    const Vector k1 = rhs(x, t);
    const Vector k2 = rhs(x + (0.5 * dt) * k1, t + 0.5 * dt);
    const Vector k3 = rhs(x + (0.5 * dt) * k2, t + 0.5 * dt);
    const Vector k4 = rhs(x + dt * k3, t + dt);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

TrajectoryOracle::TrajectoryOracle(const TimeVaryingObjective& obj, Vector warm_start, OracleOptions options)
    : obj_(&obj), last_(std::move(warm_start)), options_(options) {}

Vector TrajectoryOracle::operator()(double t) {
  last_ = optimal_point(*obj_, t, last_, options_);
  return last_;
}

}  // namespace tvopt
