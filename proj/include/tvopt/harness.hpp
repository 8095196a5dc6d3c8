#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvopt/bounds.hpp"
#include "tvopt/problems.hpp"
#include "tvopt/tracker.hpp"

namespace tvopt {

/// Drift of the quadratic test problem: linear (offset + rate·t) or sine
/// (amplitude·sin(frequency·t)).
struct QuadraticSpec {
  std::size_t n = 1;
  std::string drift = "linear";
  Vector offset{0.0};
  Vector rate{1.0};
  Vector amplitude{1.0};
  double frequency = 1.0;
};

struct ProblemSpec {
  std::string kind = "scalar";  // scalar | tracking | quadratic
  ScalarProblemParams scalar;
  TrackingProblemParams tracking;
  QuadraticSpec quadratic;
};

/// Builds the objective. `horizon` bounds the time range used to size the
/// quadratic problem's drift constants.
TimeVaryingObjective build_problem(const ProblemSpec& spec, double horizon);

/// One solver line of an experiment. hybrid_c may be given directly or as a
/// multiple of c_min at the run's h.
struct SolverSpec {
  SolverConfig config;
  std::string label;  // defaults to the variant name
  std::optional<double> hybrid_c_scale;

  std::string name() const;
};

struct ExperimentSpec {
  std::string name = "experiment";
  ProblemSpec problem;
  std::vector<SolverSpec> solvers;
  std::vector<double> h_grid;
  long long kbar = 0;
  /// Run-level defaults; each solver's config carries the effective values.
  std::optional<double> h;
  double gamma = 0.2;
  int tau = 1;
  std::optional<double> newton_c;

  /// Checks kbar < steps and a strictly increasing, positive h_grid.
  void validate(bool require_grid) const;
};

/// Solver config with h set and hybrid_c resolved against the problem's
/// constants at that h.
SolverConfig resolve_config(const SolverSpec& solver, const TimeVaryingObjective& obj, double h);

/// max_{k > kbar} err_k. Throws TooShort when no record lies beyond kbar.
double worst_case_error(const TrajectoryLog& log, long long kbar);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of log(error) about the fitted line.
  double residual = 0.0;
};

/// Least-squares fit of log(error) against log(h). Errors below clamp_floor
/// are raised to it first; any error that is still ≤ 0 throws NonPositive.
/// Needs at least 3 pairs and 2 distinct h values.
SlopeFit loglog_fit(const std::vector<std::pair<double, double>>& pairs, double clamp_floor = 0.0);
double loglog_slope(const std::vector<std::pair<double, double>>& pairs, double clamp_floor = 0.0);

struct SweepCell {
  std::string variant;     // solver label
  std::optional<int> tau;  // nullopt: infeasible under the budget
  double h = 0.0;
  std::optional<double> worst_case_error;
  double slope = 0.0;     // fitted over this solver's feasible cells; NaN if < 3
  double envelope = 0.0;  // asymptotic bound for the cell; NaN if none applies

  /// Field-wise equality in which NaN equals NaN.
  friend bool operator==(const SweepCell& a, const SweepCell& b);
};

struct SweepResult {
  std::string experiment;
  std::vector<SweepCell> cells;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Thrown by run_sweep when a cell fails for a reason other than budget
/// infeasibility. Carries the first failure (in spec order) and every cell
/// that did complete; failed cells are left out.
class SweepError : public Error {
 public:
  SweepError(const Error& cause, std::string cell, SweepResult partial)
      : Error(cause.code(), cell + ": " + cause.detail()), partial_(std::move(partial)) {}
  const SweepResult& partial_result() const noexcept { return partial_; }

 private:
  SweepResult partial_;
};

/// Runs every (solver, h) pair, at most `jobs` at a time (0 = hardware
/// concurrency). Output order is fixed by the spec, not by scheduling.
SweepResult run_sweep(const ExperimentSpec& spec, unsigned jobs = 0);

/// Asymptotic bound for one solver at h: the O(h²) (else O(h)) gradient
/// envelope for GTT/AGT, the Newton floor for NTT/ANT when newton_c is set
/// and admissible. NaN otherwise (including budgeted or saturated runs).
double asymptotic_envelope(const SolverConfig& config, const TimeVaryingObjective& obj,
                           std::optional<double> newton_c);

inline constexpr const char* kTimeseriesHeader =
    "experiment,variant,tau,h,gamma,k,t,err,pred_err,grad_norm,bound_env,switched";
inline constexpr const char* kSweepHeader = "experiment,variant,tau,h,worst_case_error,slope,envelope";

/// Formats with 17 significant digits; NaN as "nan", infinities as "inf"/"-inf".
std::string format_double(double v);

/// Header plus one row per record; state columns x0..x{n-1}, xs0..xs{n-1}
/// follow the fixed columns. `labels` names each log (defaults to the variant).
void write_timeseries_csv(std::ostream& out, const std::string& experiment, const std::vector<TrajectoryLog>& logs,
                          const std::vector<std::string>& labels = {});

void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Parses a sweep CSV written by write_sweep_csv. Throws InvalidArgument on a
/// header or field mismatch.
SweepResult read_sweep_csv(std::istream& in);

}  // namespace tvopt
