#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tvopt/bounds.hpp"
#include "tvopt/config.hpp"
#include "tvopt/harness.hpp"
#include "tvopt/problems.hpp"
#include "tvopt/tracker.hpp"

namespace py = pybind11;
using namespace tvopt;

namespace {

SmoothnessConstants constants_from(const py::dict& d) {
  SmoothnessConstants c;
  c.m = d["m"].cast<double>();
  c.L = d["L"].cast<double>();
  c.C0 = d["C0"].cast<double>();
  c.C1 = d["C1"].cast<double>();
  c.C2 = d["C2"].cast<double>();
  c.C3 = d["C3"].cast<double>();
  c.validate();
  return c;
}

py::dict constants_to(const SmoothnessConstants& c) {
  py::dict d;
  d["m"] = c.m;
  d["L"] = c.L;
  d["C0"] = c.C0;
  d["C1"] = c.C1;
  d["C2"] = c.C2;
  d["C3"] = c.C3;
  return d;
}

py::list vectors_to(const std::vector<StepRecord>& records, Vector StepRecord::*field) {
  py::list out;
  for (const auto& r : records) out.append(py::cast(std::vector<double>((r.*field).begin(), (r.*field).end())));
  return out;
}

// Column-oriented view of one log.
py::dict log_to(const TrajectoryLog& log, const std::string& label) {
  py::dict d;
  d["label"] = label;
  d["variant"] = std::string(to_string(log.variant));
  d["tau"] = log.tau;
  d["h"] = log.h;
  d["gamma"] = log.gamma;
  d["switch_k"] = log.switch_k;
  std::vector<long long> k;
  std::vector<double> t, err, pred_err, grad_norm, bound_env;
  std::vector<bool> switched;
  for (const auto& r : log.records) {
    k.push_back(r.k);
    t.push_back(r.t);
    err.push_back(r.err);
    pred_err.push_back(r.pred_err);
    grad_norm.push_back(r.grad_norm);
    bound_env.push_back(r.bound_env);
    switched.push_back(r.switched);
  }
  d["k"] = k;
  d["t"] = t;
  d["err"] = err;
  d["pred_err"] = pred_err;
  d["grad_norm"] = grad_norm;
  d["bound_env"] = bound_env;
  d["switched"] = switched;
  d["x"] = vectors_to(log.records, &StepRecord::x);
  d["x_star"] = vectors_to(log.records, &StepRecord::x_star);
  return d;
}

py::list run_config(const std::string& config_json, std::optional<double> h) {
  const ExperimentSpec spec = parse_experiment(config_json);
  const double run_h = h.value_or(spec.h.value_or(spec.h_grid.empty() ? 0.0 : spec.h_grid.front()));
  double horizon = 0.0;
  for (const auto& s : spec.solvers) horizon = std::max(horizon, s.config.t0 + s.config.steps * run_h);
  const TimeVaryingObjective obj = build_problem(spec.problem, horizon);
  py::list out;
  for (const SolverSpec& s : spec.solvers) {
    TrajectoryLog log;
    {
      py::gil_scoped_release release;
      log = run(obj, resolve_config(s, obj, run_h));
    }
    out.append(log_to(log, s.name()));
  }
  return out;
}

py::list sweep_config(const std::string& config_json, unsigned jobs) {
  const ExperimentSpec spec = parse_experiment(config_json);
  SweepResult result;
  {
    py::gil_scoped_release release;
    result = run_sweep(spec, jobs);
  }
  py::list out;
  for (const SweepCell& c : result.cells) {
    py::dict d;
    d["variant"] = c.variant;
    d["tau"] = c.tau;
    d["h"] = c.h;
    d["worst_case_error"] = c.worst_case_error;
    d["slope"] = c.slope;
    d["envelope"] = c.envelope;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prediction-correction tracking of time-varying convex programs";
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("example_names", &example_names);
  m.def("example_config", [](const std::string& name) { return example_config(name); }, py::arg("name"));

  m.def("run", &run_config, py::arg("config_json"), py::arg("h") = py::none(),
        "Run every solver of a JSON config at h (default: the config's h). Returns one dict per solver.");
  m.def("run_sweep", &sweep_config, py::arg("config_json"), py::arg("jobs") = 0,
        "Sweep the config's h_grid. Returns one dict per (solver, h) cell.");

  m.def("scalar_problem_constants",
        [](double omega, double kappa, double mu) {
          return constants_to(scalar_problem_constants(ScalarProblemParams{omega, kappa, mu}));
        },
        py::arg("omega") = ScalarProblemParams{}.omega, py::arg("kappa") = 7.5, py::arg("mu") = 1.75);

  m.def("contraction_factor", &contraction_factor, py::arg("gamma"), py::arg("m"), py::arg("L"));
  m.def("truncation_bound", [](double h, const py::dict& c) { return truncation_bound(h, constants_from(c)); },
        py::arg("h"), py::arg("constants"));
  m.def("max_h_for_oh2",
        [](int tau, double gamma, const py::dict& c) { return max_h_for_oh2(tau, gamma, constants_from(c)); },
        py::arg("tau"), py::arg("gamma"), py::arg("constants"));
  m.def("hybrid_c_min",
        [](int tau, double gamma, double h, const py::dict& c) {
          return hybrid_constants(tau, gamma, h, constants_from(c)).c_min;
        },
        py::arg("tau"), py::arg("gamma"), py::arg("h"), py::arg("constants"));
  m.def("bound_report",
        [](int tau, double gamma, double h, const py::dict& c, std::optional<double> newton_c) {
          const std::string text = bound_report_json(bound_report(tau, gamma, h, constants_from(c), newton_c));
          return py::module_::import("json").attr("loads")(text);
        },
        py::arg("tau"), py::arg("gamma"), py::arg("h"), py::arg("constants"), py::arg("newton_c") = py::none());

  m.def("budget_tau",
        [](const std::string& variant, double h) { return budget_tau(BudgetSchedule{}, parse_variant(variant), h); },
        py::arg("variant"), py::arg("h"), "Correction steps under the default budget, or None if infeasible.");

  m.def("worst_case_error",
        [](const std::vector<double>& errs, long long kbar) {
          TrajectoryLog log;
          for (std::size_t k = 0; k < errs.size(); ++k) {
            StepRecord r;
            r.k = static_cast<long long>(k);
            r.err = errs[k];
            log.records.push_back(std::move(r));
          }
          return worst_case_error(log, kbar);
        },
        py::arg("errors"), py::arg("kbar"));
  m.def("loglog_slope", &loglog_slope, py::arg("pairs"), py::arg("clamp_floor") = 0.0);
}
