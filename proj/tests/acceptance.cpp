// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tvopt/bounds.hpp"
#include "tvopt/config.hpp"
#include "tvopt/errors.hpp"
#include "tvopt/harness.hpp"
#include "tvopt/oracle.hpp"
#include "tvopt/problems.hpp"
#include "tvopt/stepper.hpp"
#include "tvopt/tracker.hpp"

using namespace tvopt;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Runs `body`, turning any exception into a failed criterion.
void criterion(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

SolverSpec find_solver(const ExperimentSpec& spec, const std::string& label) {
  for (const SolverSpec& s : spec.solvers)
    if (s.name() == label) return s;
  throw Error(ErrorCode::InvalidArgument, "no solver " + label);
}

std::map<std::string, double> slopes_by_solver(const SweepResult& r) {
  std::map<std::string, double> out;
  for (const SweepCell& c : r.cells) out[c.variant] = c.slope;
  return out;
}

void scalar_floors() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentSpec spec = parse_experiment(example_config("scalar-a"));
  const TimeVaryingObjective obj = build_problem(spec.problem, 0.0);
  std::map<std::string, double> floor;
  for (const char* label : {"RG", "GTT", "NTT", "AGT"}) {
    const SolverConfig cfg = resolve_config(find_solver(spec, label), obj, 0.1);
    floor[label] = worst_case_error(run(obj, cfg), spec.kbar);
  }
  const double elapsed = seconds_since(start);
  const bool ok_rg = within(floor["RG"], 3e-3, 3e-2);
  const bool ok_gtt = within(floor["GTT"], 1e-6, 1e-4);
  const bool ok_ntt = within(floor["NTT"], 1e-12, 1e-8);
  const bool ok_agt = floor["AGT"] <= 10 * floor["GTT"] && floor["AGT"] >= floor["GTT"] / 10;
  report("scalar floors",
         ok_rg && ok_gtt && ok_ntt && ok_agt && elapsed < 60.0,
         "RG " + fmt("%.3e", floor["RG"]) + (ok_rg ? "" : " (outside [3e-3, 3e-2])") + ", GTT " +
             fmt("%.3e", floor["GTT"]) + ", NTT " + fmt("%.3e", floor["NTT"]) + ", AGT " + fmt("%.3e", floor["AGT"]) +
             " (AGT/GTT = " + fmt("%.2f", floor["AGT"] / floor["GTT"]) + "), " + fmt("%.1f s", elapsed));
}

void scalar_slopes() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec = parse_experiment(example_config("scalar-a"));
  spec.h_grid = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
  std::vector<SolverSpec> keep;
  for (const char* label : {"RG", "GTT", "AGT", "NTT"}) keep.push_back(find_solver(spec, label));
  spec.solvers = keep;
  auto slope = slopes_by_solver(run_sweep(spec));
  const double elapsed = seconds_since(start);
  const bool ok = std::abs(slope["RG"] - 1.0) <= 0.35 && std::abs(slope["GTT"] - 2.0) <= 0.35 &&
                  std::abs(slope["AGT"] - 2.0) <= 0.35 && std::abs(slope["NTT"] - 4.0) <= 0.5 && elapsed < 300.0;
  report("scaling laws", ok,
         "slopes RG " + fmt("%.3f", slope["RG"]) + ", GTT " + fmt("%.3f", slope["GTT"]) + ", AGT " +
             fmt("%.3f", slope["AGT"]) + ", NTT " + fmt("%.3f", slope["NTT"]) + ", " + fmt("%.1f s", elapsed));
}

void bound_soundness() {
  const TimeVaryingObjective obj = make_scalar_problem({});
  const SmoothnessConstants& c = *obj.constants;
  long long checked = 0;
  long long envelope_violations = 0;
  long long truncation_violations = 0;
  int runs = 0;
  double worst_ratio = 0.0;
  for (Variant v : {Variant::GTT, Variant::AGT}) {
    for (double gamma : {0.1, 0.2}) {
      for (int tau : {1, 3}) {
        const double h_max = max_h_for_oh2(tau, gamma, c);
        for (double h : {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0}) {
          if (!(h < h_max)) continue;
          SolverConfig cfg;
          cfg.variant = v;
          cfg.h = h;
          cfg.gamma = gamma;
          cfg.tau = tau;
          cfg.steps = static_cast<long long>(std::lround(400.0 / h));
          cfg.x0 = Vector{0.0};
          const TrajectoryLog log = run(obj, cfg);
          ++runs;
          const double bound = truncation_bound(h, c);
          for (const StepRecord& r : log.records) {
            ++checked;
            if (!(r.err <= r.bound_env)) ++envelope_violations;
            if (r.bound_env > 0) worst_ratio = std::max(worst_ratio, r.err / r.bound_env);
            const Vector euler = predict(obj, r.x, r.t, h, PredictionMode::ExactTimeDerivative);
            const double delta = distance(euler, continuous_flow(obj, r.x, r.t, h));
            if (!(delta <= bound)) ++truncation_violations;
          }
        }
      }
    }
  }
  report("bound soundness", envelope_violations == 0 && truncation_violations == 0 && runs > 0,
         std::to_string(runs) + " admissible GTT/AGT runs, " + std::to_string(checked) + " samples; " +
             std::to_string(envelope_violations) + " envelope and " + std::to_string(truncation_violations) +
             " truncation violations; max err/envelope " + fmt("%.3f", worst_ratio));
}

void constants_reproduction() {
  const double rho = contraction_factor(0.2, 1.0, 6.7422);
  const double h_max = max_h_for_oh2(1, 0.2, *make_scalar_problem({}).constants);
  const BudgetSchedule schedule;
  const std::vector<double> grid{0.1, 0.25, 1.0 / 3, 0.5, 2.0 / 3, 0.75, 1.0};
  const std::vector<int> gradient_row{1, 3, 4, 6, 8, 9, 12};
  const std::vector<int> newton_row{0, 1, 1, 2, 2, 3, 4};  // 0 = infeasible
  int mismatches = 0;
  int infeasible = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (Variant v : {Variant::RG, Variant::AGT}) {
      if (budget_tau(schedule, v, grid[j]).value_or(0) != gradient_row[j]) ++mismatches;
    }
    for (Variant v : {Variant::RN, Variant::ANT}) {
      const int tau = budget_tau(schedule, v, grid[j]).value_or(0);
      if (tau != newton_row[j]) ++mismatches;
      if (tau == 0) ++infeasible;
    }
  }
  report("constants reproduction", rho == 0.8 && std::abs(h_max - 1.029) <= 0.002 && mismatches == 0 && infeasible == 2,
         "rho " + fmt("%.6g", rho) + ", h_max_oh2 " + fmt("%.5f", h_max) + ", step-count table mismatches " +
             std::to_string(mismatches) + ", infeasible cells " + std::to_string(infeasible));
}

void tracking_experiment() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentSpec spec = parse_experiment(example_config("tracking"));
  const TimeVaryingObjective obj = build_problem(spec.problem, 0.0);
  std::map<std::string, double> floor;
  for (const char* label : {"RG", "AGT", "ANT"}) {
    floor[label] = worst_case_error(run(obj, resolve_config(find_solver(spec, label), obj, 1.0)), spec.kbar);
  }
  ExperimentSpec sweep = spec;
  sweep.solvers = {find_solver(spec, "RG"), find_solver(spec, "AGT"), find_solver(spec, "ANT")};
  auto slope = slopes_by_solver(run_sweep(sweep));
  const double elapsed = seconds_since(start);

  const bool ordered = floor["RG"] > floor["AGT"] && floor["AGT"] > floor["ANT"];
  const bool floors = within(floor["RG"], 1.0, 100.0) && within(floor["AGT"], 1e-2, 1.0) &&
                      within(floor["ANT"], 1e-6, 1e-4);
  const bool slopes = std::abs(slope["RG"] - 1.0) <= 0.5 && std::abs(slope["AGT"] - 2.0) <= 0.5 &&
                      std::abs(slope["ANT"] - 4.0) <= 0.5;
  report("tracking experiment", ordered && floors && slopes && elapsed < 300.0,
         "floors RG " + fmt("%.3e", floor["RG"]) + ", AGT " + fmt("%.3e", floor["AGT"]) + ", ANT " +
             fmt("%.3e", floor["ANT"]) + (ordered ? " (ordered)" : " (not ordered RG > AGT > ANT)") + "; slopes RG " +
             fmt("%.3f", slope["RG"]) + ", AGT " + fmt("%.3f", slope["AGT"]) + ", ANT " + fmt("%.3f", slope["ANT"]) +
             ", " + fmt("%.1f s", elapsed));
}

void hybrid_behavior() {
  const ExperimentSpec spec = parse_experiment(example_config("scalar-a"));
  const TimeVaryingObjective obj = build_problem(spec.problem, 0.0);
  const TrajectoryLog hyb = run(obj, resolve_config(find_solver(spec, "Hybrid"), obj, 0.1));
  const TrajectoryLog gtt = run(obj, resolve_config(find_solver(spec, "GTT"), obj, 0.1));
  const double ntt_floor = worst_case_error(run(obj, resolve_config(find_solver(spec, "NTT"), obj, 0.1)), spec.kbar);
  if (!hyb.switch_k) {
    report("hybrid behavior", false, "no switch occurred");
    return;
  }
  const long long s = *hyb.switch_k;
  bool matches = true;
  for (long long k = 0; k <= s; ++k) matches = matches && hyb.records[k].x[0] == gtt.records[k].x[0];
  long long reached = -1;
  for (long long k = s; k < static_cast<long long>(hyb.records.size()); ++k) {
    if (hyb.records[k].err <= 10 * ntt_floor) {
      reached = k;
      break;
    }
  }
  bool stays = reached >= 0;
  for (long long k = std::max(reached, 0LL); stays && k < static_cast<long long>(hyb.records.size()); ++k) {
    stays = hyb.records[k].err <= 10 * ntt_floor;
  }
  const bool ok = matches && reached >= 0 && reached - s <= 2 && stays;
  report("hybrid behavior", ok,
         "switch at k = " + std::to_string(s) + (matches ? ", identical to GTT before it" : ", differs from GTT") +
             ", within 10x of NTT floor " + fmt("%.3e", ntt_floor) + " after " +
             (reached >= 0 ? std::to_string(reached - s) : std::string("never")) + " samples" +
             (stays ? "" : " (does not stay there)"));
}

void property_suites() {
  std::vector<std::string> failed;
  long long checks = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && (failed.empty() || failed.back() != what)) failed.push_back(what);
  };

  const ScalarProblemParams pa;
  const ScalarProblemParams pb{0.02 * 3.14159265358979323846, 0.1, 0.5};
  for (const ScalarProblemParams& p : {pa, pb}) {
    const TimeVaryingObjective obj = make_scalar_problem(p);
    const SmoothnessConstants& c = *obj.constants;
    for (int i = 0; i < 200; ++i) {
      const double t = 0.73 * i;
      const double xs = optimal_point(obj, t, Vector{0.0})[0];
      // gradient contraction
      for (double gamma : {0.1, 1.9 / c.L}) {
        const double rho = contraction_factor(gamma, c.m, c.L);
        Vector x{xs + 3.0 * std::sin(1.7 * i)};
        for (int s = 0; s < 3; ++s) {
          const Vector next = correct(obj, x, t, CorrectionMode::gradient(gamma), 1);
          expect(std::abs(next[0] - xs) <= rho * std::abs(x[0] - xs) + 1e-9, "gradient contraction");
          x = next;
        }
      }
      // Newton quadratic contraction inside ‖e‖ ≤ m/C1
      const double e0 = (c.m / c.C1) * std::cos(0.37 * i);
      const Vector xn = correct(obj, Vector{xs + e0}, t, CorrectionMode::newton(), 1);
      expect(std::abs(xn[0] - xs) <= c.C1 / (2 * c.m) * e0 * e0 + 1e-9, "Newton quadratic contraction");
      // backward-difference error ≤ h C3 / 2
      for (double h : {0.01, 0.1, 1.0}) {
        const Vector x{3.0 * std::sin(0.91 * i)};
        const double err = distance(fd_time_gradient(obj, x, t, t - h), obj.time_gradient(x, t));
        expect(err <= h * c.C3 / 2 + 1e-15, "FD error <= h C3 / 2");
      }
    }
    // trajectory Lipschitz
    for (double h : {0.1, 1.0}) {
      const auto traj = optimal_trajectory(obj, 0.0, h, 1000, Vector{0.0});
      for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        expect(distance(traj[k + 1], traj[k]) <= c.C0 * h / c.m + 1e-9, "trajectory Lipschitz (scalar)");
      }
    }
  }
  {
    const TimeVaryingObjective obj = make_tracking_problem({}, lissajous_reference_path(0.01));
    const SmoothnessConstants& c = *obj.constants;
    const auto traj = optimal_trajectory(obj, 0.0, 1.0, 1000, Vector{100.0, 100.0});
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      expect(distance(traj[k + 1], traj[k]) <= c.C0 * 1.0 / c.m + 1e-9, "trajectory Lipschitz (tracking)");
    }
  }
  // quadratic exactness: zero truncation, Newton solves in one step
  for (const Curve& drift : {linear_drift(Vector{1.0, -1.0, 0.5}, Vector{0.3, -2.0, 1.0})}) {
    const TimeVaryingObjective obj = make_quadratic_problem(3, drift, 100.0);
    for (int i = 0; i < 100; ++i) {
      const double t = 0.9 * i;
      const Vector x{std::sin(i * 1.0), std::cos(i * 2.0), 0.1 * i};
      const double delta = distance(predict(obj, x, t, 0.5, PredictionMode::ExactTimeDerivative),
                                    continuous_flow(obj, x, t, 0.5));
      expect(delta <= 1e-12, "quadratic truncation is zero");
      const Vector xn = correct(obj, x, t, CorrectionMode::newton(), 1);
      expect(distance(xn, drift.position(t)) <= 1e-12, "Newton one-step on quadratic");
    }
  }
  std::string detail = std::to_string(checks) + " checks";
  for (const auto& f : failed) detail += "; failed: " + f;
  report("property suites", failed.empty(), detail);
}

}  // namespace

int main() {
  set_warning_handler([](std::string_view) {});
  const auto start = std::chrono::steady_clock::now();
  criterion("scalar floors", scalar_floors);
  criterion("scaling laws", scalar_slopes);
  criterion("bound soundness", bound_soundness);
  criterion("constants reproduction", constants_reproduction);
  criterion("tracking experiment", tracking_experiment);
  criterion("hybrid behavior", hybrid_behavior);
  criterion("property suites", property_suites);
  std::printf("%d criteria failed, %.1f s total\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
