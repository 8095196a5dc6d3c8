#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "tvopt/errors.hpp"
#include "tvopt/objective.hpp"
#include "tvopt/stepper.hpp"

namespace tvopt {

enum class Variant { GTT, NTT, AGT, ANT, RG, RN, Hybrid };

std::string_view to_string(Variant v);
/// Case-sensitive name lookup ("GTT", "RG", ...). Throws InvalidArgument.
Variant parse_variant(std::string_view name);

PredictionMode prediction_mode(Variant v);
/// True for variants whose corrections are Newton steps (Hybrid: false,
/// it starts with gradient steps).
bool uses_newton(Variant v);

enum class RefinementPolicy { ExtraGradients, ExtraNewton, Prediction };

std::string_view to_string(RefinementPolicy p);
RefinementPolicy parse_refinement_policy(std::string_view name);

/// Fixed computational budget per sample. A Newton step costs
/// (1 + hessian_cost_multiplier) gradient evaluations.
struct BudgetSchedule {
  double grad_eval_cost = 1.0 / 120.0;  // s
  double hessian_cost_multiplier = 2.0;
  double correction_time_fraction = 0.1;
  double refinement_time = 1.0 / 40.0;  // s
  RefinementPolicy refinement_policy = RefinementPolicy::Prediction;

  void validate() const;
  double newton_cost() const { return grad_eval_cost * (1.0 + hessian_cost_multiplier); }
};

/// Correction steps affordable in correction_time_fraction · h, or nullopt
/// when not even one fits (the variant is infeasible at this h).
std::optional<int> budget_tau(const BudgetSchedule& schedule, Variant variant, double h);

/// Steps that fit in the refinement slot for the schedule's policy
/// (0 for the Prediction policy).
int refinement_steps(const BudgetSchedule& schedule);

/// How a speed limit is enforced.
///   NetDisplacement : clip x_k → x_{k+1} as a whole.
///   SeparatePhases  : clip the prediction to v_max·h, then the correction to
///                     whatever length is left.
enum class SaturationMode { NetDisplacement, SeparatePhases };

/// Moves from x_from towards x_to by at most v_max · h.
Vector saturate_motion(const Vector& x_from, const Vector& x_to, double v_max, double h);

struct SolverConfig {
  Variant variant = Variant::GTT;
  double h = 0.1;
  double gamma = 0.2;
  int tau = 1;
  long long steps = 1;
  Vector x0;
  double t0 = 0.0;
  std::optional<double> v_max;
  SaturationMode saturation = SaturationMode::NetDisplacement;
  std::optional<BudgetSchedule> budget;
  std::optional<double> hybrid_c;
  bool backtracking = false;

  void validate() const;
};

struct StepRecord {
  long long k = 0;
  double t = 0.0;
  Vector x;
  Vector x_pred;  // empty on the last record
  Vector x_star;
  double err = 0.0;
  double pred_err = 0.0;  // NaN on the last record
  double grad_norm = 0.0;
  double bound_env = 0.0;  // NaN when no envelope applies
  bool switched = false;
};

struct TrajectoryLog {
  Variant variant = Variant::GTT;
  int tau = 1;
  double h = 0.0;
  double gamma = 0.0;
  std::vector<StepRecord> records;
  std::optional<long long> switch_k;
};

/// Thrown when a run fails part-way; carries every record completed so far.
class RunError : public Error {
 public:
  RunError(const Error& cause, TrajectoryLog partial)
      : Error(cause.code(), cause.detail()), partial_(std::move(partial)) {}
  const TrajectoryLog& partial_log() const noexcept { return partial_; }

 private:
  TrajectoryLog partial_;
};

/// Ground truth x*(t). Called once per sample with increasing t.
using OracleFn = std::function<Vector(double)>;

/// Runs `steps` samples of the configured variant. Without an oracle a
/// warm-started Newton oracle seeded at x0 is used. Hybrid configs are
/// forwarded to hybrid_run.
TrajectoryLog run(const TimeVaryingObjective& obj, const SolverConfig& config, OracleFn oracle = {});

/// Gradient tracking until ‖∇ₓf(x_k; t_k)‖ ≤ m c h², then Newton tracking.
/// Throws InvalidHybridC unless c exceeds hybrid_constants(...).c_min.
TrajectoryLog hybrid_run(const TimeVaryingObjective& obj, const SolverConfig& config, OracleFn oracle = {});

}  // namespace tvopt
