#include "tvopt/tracker.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "tvopt/bounds.hpp"
#include "tvopt/oracle.hpp"

namespace tvopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Slack for floor() on cost ratios such as (h/10)/(1/120) with h = 1/3.
constexpr double kBudgetSlack = 1e-9;

int affordable(double time, double cost) { return static_cast<int>(std::floor(time / cost + kBudgetSlack)); }

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::GTT: return "GTT";
    case Variant::NTT: return "NTT";
    case Variant::AGT: return "AGT";
    case Variant::ANT: return "ANT";
    case Variant::RG: return "RG";
    case Variant::RN: return "RN";
    case Variant::Hybrid: return "Hybrid";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::GTT, Variant::NTT, Variant::AGT, Variant::ANT, Variant::RG, Variant::RN,
                    Variant::Hybrid}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(name) + "'");
}

PredictionMode prediction_mode(Variant v) {
  switch (v) {
    case Variant::GTT:
    case Variant::NTT:
    case Variant::Hybrid:
      return PredictionMode::ExactTimeDerivative;
    case Variant::AGT:
    case Variant::ANT:
      return PredictionMode::BackwardDifference;
    case Variant::RG:
    case Variant::RN:
      return PredictionMode::NoPrediction;
  }
  return PredictionMode::NoPrediction;
}

bool uses_newton(Variant v) { return v == Variant::NTT || v == Variant::ANT || v == Variant::RN; }

std::string_view to_string(RefinementPolicy p) {
  switch (p) {
    case RefinementPolicy::ExtraGradients: return "extra_gradients";
    case RefinementPolicy::ExtraNewton: return "extra_newton";
    case RefinementPolicy::Prediction: return "prediction";
  }
  return "?";
}

RefinementPolicy parse_refinement_policy(std::string_view name) {
  for (auto p : {RefinementPolicy::ExtraGradients, RefinementPolicy::ExtraNewton, RefinementPolicy::Prediction}) {
    if (to_string(p) == name) return p;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown refinement policy '" + std::string(name) + "'");
}

void BudgetSchedule::validate() const {
  if (!(grad_eval_cost > 0.0) || !(hessian_cost_multiplier >= 0.0) || !(correction_time_fraction > 0.0) ||
      !(refinement_time >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "budget schedule needs positive costs and time fractions");
  }
}

std::optional<int> budget_tau(const BudgetSchedule& schedule, Variant variant, double h) {
  schedule.validate();
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling period must be positive");
  const double cost = uses_newton(variant) ? schedule.newton_cost() : schedule.grad_eval_cost;
  const int tau = affordable(schedule.correction_time_fraction * h, cost);
  if (tau < 1) return std::nullopt;
  return tau;
}

int refinement_steps(const BudgetSchedule& schedule) {
  switch (schedule.refinement_policy) {
    case RefinementPolicy::ExtraGradients: return affordable(schedule.refinement_time, schedule.grad_eval_cost);
    case RefinementPolicy::ExtraNewton: return affordable(schedule.refinement_time, schedule.newton_cost());
    case RefinementPolicy::Prediction: return 0;
  }
  return 0;
}

Vector saturate_motion(const Vector& x_from, const Vector& x_to, double v_max, double h) {
  if (!(v_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
  const Vector step = x_to - x_from;
  const double len = norm(step);
  const double limit = v_max * h;
  if (len <= limit) return x_to;
  return x_from + (limit / len) * step;
}

void SolverConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "h must be positive");
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be >= 1");
  if (!budget && tau < 1) throw Error(ErrorCode::InvalidArgument, "tau must be >= 1");
  if (x0.empty() || !x0.all_finite()) throw Error(ErrorCode::InvalidArgument, "x0 must be a finite vector");
  const bool gradient_steps = !uses_newton(variant) ||
                              (budget && budget->refinement_policy == RefinementPolicy::ExtraGradients);
  if (gradient_steps && !(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (v_max && !(*v_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
  if (budget) {
    budget->validate();
    if (variant == Variant::Hybrid) throw Error(ErrorCode::InvalidArgument, "budget mode does not support Hybrid");
  }
  if (variant == Variant::Hybrid && !hybrid_c) throw Error(ErrorCode::InvalidArgument, "Hybrid needs hybrid_c");
}

namespace {

struct Driver {
  const TimeVaryingObjective& obj;
  const SolverConfig& cfg;
  OracleFn oracle;
  TrajectoryLog log;

  int tau = 1;
  int refine = 0;
  double switch_threshold = std::numeric_limits<double>::infinity();
  bool has_envelope = false;

  void prepare() {
    cfg.validate();
    if (cfg.x0.size() != obj.dimension) throw Error(ErrorCode::DimensionMismatch, "x0 does not match the objective");
    if (prediction_mode(cfg.variant) == PredictionMode::ExactTimeDerivative && !obj.has_mixed_tx()) {
      throw Error(ErrorCode::MissingDerivative, std::string(to_string(cfg.variant)) + " needs ∇ₜₓf");
    }

    tau = cfg.tau;
    if (cfg.budget) {
      const auto t = budget_tau(*cfg.budget, cfg.variant, cfg.h);
      if (!t) {
        throw Error(ErrorCode::Infeasible, std::string(to_string(cfg.variant)) + " does not fit the budget at h = " +
                                               std::to_string(cfg.h));
      }
      tau = *t;
      if (prediction_mode(cfg.variant) == PredictionMode::NoPrediction) refine = refinement_steps(*cfg.budget);
    }

    const bool gradient_steps =
        !uses_newton(cfg.variant) ||
        (refine > 0 && cfg.budget->refinement_policy == RefinementPolicy::ExtraGradients);
    if (gradient_steps && obj.constants && cfg.gamma >= 2.0 / obj.constants->L) {
      warn("gamma = " + std::to_string(cfg.gamma) + " >= 2/L = " + std::to_string(2.0 / obj.constants->L) +
           "; gradient corrections may diverge");
    }

    if (cfg.variant == Variant::Hybrid) {
      const SmoothnessConstants& c = obj.require_constants();
      const HybridConstants hc = hybrid_constants(tau, cfg.gamma, cfg.h, c);
      if (!(*cfg.hybrid_c > hc.c_min)) {
        throw Error(ErrorCode::InvalidHybridC, "hybrid_c = " + std::to_string(*cfg.hybrid_c) +
                                                   " must exceed c_min = " + std::to_string(hc.c_min));
      }
      switch_threshold = hc.switch_threshold(*cfg.hybrid_c);
    }

    has_envelope = (cfg.variant == Variant::GTT || cfg.variant == Variant::AGT) && obj.constants && !cfg.v_max &&
                   !cfg.budget && !cfg.backtracking &&
                   contraction_factor(cfg.gamma, obj.constants->m, obj.constants->L) < 1.0;

    if (!oracle) {
      auto shared = std::make_shared<TrajectoryOracle>(obj, cfg.x0);
      oracle = [shared](double t) { return (*shared)(t); };
    }

    log.variant = cfg.variant;
    log.tau = tau;
    log.h = cfg.h;
    log.gamma = cfg.gamma;
    log.records.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  }

  // The backward difference is unavailable on the first sample, so the AGT
  // recursion starts from x_1 rather than x_0.
  double envelope(long long k, double current_err) const {
    const SmoothnessConstants& c = *obj.constants;
    if (cfg.variant != Variant::AGT) {
      const double e0 = k == 0 ? current_err : log.records.front().err;
      return theorem1_envelope(k, tau, cfg.h, cfg.gamma, c, e0).value();
    }
    if (k <= 1) return current_err;
    return theorem3_envelope(k - 1, tau, cfg.h, cfg.gamma, c, log.records[1].err).value();
  }

  void execute() {
    const CorrectionOptions copt{cfg.backtracking};
    const CorrectionMode gradient = CorrectionMode::gradient(cfg.gamma);
    const CorrectionMode newton = CorrectionMode::newton();
    const PredictionMode pmode = prediction_mode(cfg.variant);

    Vector x = cfg.x0;
    std::optional<Vector> prev_grad;  // ∇ₓf(x_k; t_{k−1})
    bool switched = false;

    for (long long k = 0; k <= cfg.steps; ++k) {
      const double t = cfg.t0 + static_cast<double>(k) * cfg.h;
      StepRecord rec;
      rec.k = k;
      rec.t = t;
      rec.x = x;
      rec.x_star = oracle(t);
      rec.err = distance(x, rec.x_star);
      const Vector g = obj.gradient(x, t);
      rec.grad_norm = norm(g);
      rec.pred_err = kNaN;
      rec.bound_env = kNaN;
      if (!log.records.empty()) log.records.back().pred_err = distance(log.records.back().x_pred, rec.x_star);

      if (cfg.variant == Variant::Hybrid && !switched && rec.grad_norm <= switch_threshold) {
        switched = true;
        log.switch_k = k;
      }
      rec.switched = switched;
      if (has_envelope) rec.bound_env = envelope(k, rec.err);

      if (k == cfg.steps) {
        log.records.push_back(std::move(rec));
        break;
      }

      // Refinement slot (budget mode, correction-only variants): extra steps on f(·; t_k).
      Vector start = x;
      if (refine > 0) {
        const bool extra_newton = cfg.budget->refinement_policy == RefinementPolicy::ExtraNewton;
        start = correct(obj, x, t, extra_newton ? newton : gradient, refine, copt);
      }

      Vector x_pred;
      if (pmode == PredictionMode::BackwardDifference && !prev_grad) {
        x_pred = start;
      } else {
        x_pred = predict(obj, start, t, cfg.h, pmode, prev_grad ? &*prev_grad : nullptr);
      }
      if (cfg.v_max && cfg.saturation == SaturationMode::SeparatePhases) {
        x_pred = saturate_motion(x, x_pred, *cfg.v_max, cfg.h);
      }
      rec.x_pred = x_pred;

      const double t_next = t + cfg.h;
      const bool newton_step = uses_newton(cfg.variant) || (cfg.variant == Variant::Hybrid && switched);
      Vector x_next = correct(obj, x_pred, t_next, newton_step ? newton : gradient, tau, copt);

      if (cfg.v_max) {
        if (cfg.saturation == SaturationMode::NetDisplacement) {
          x_next = saturate_motion(x, x_next, *cfg.v_max, cfg.h);
        } else {
          const double left = std::max(0.0, *cfg.v_max * cfg.h - distance(x, x_pred));
          x_next = left > 0.0 ? saturate_motion(x_pred, x_next, left, 1.0) : x_pred;
        }
      }

      if (pmode == PredictionMode::BackwardDifference) prev_grad = obj.gradient(x_next, t);
      log.records.push_back(std::move(rec));
      x = std::move(x_next);
    }
  }
};

TrajectoryLog drive(const TimeVaryingObjective& obj, const SolverConfig& config, OracleFn oracle) {
  Driver d{obj, config, std::move(oracle), {}};
  d.prepare();
  try {
    d.execute();
  } catch (const Error& e) {
    throw RunError(e, std::move(d.log));
  }
  return std::move(d.log);
}

}  // namespace

TrajectoryLog run(const TimeVaryingObjective& obj, const SolverConfig& config, OracleFn oracle) {
  return drive(obj, config, std::move(oracle));
}

TrajectoryLog hybrid_run(const TimeVaryingObjective& obj, const SolverConfig& config, OracleFn oracle) {
  if (config.variant != Variant::Hybrid) {
    throw Error(ErrorCode::InvalidArgument, "hybrid_run needs variant Hybrid");
  }
  return drive(obj, config, std::move(oracle));
}

}  // namespace tvopt
