// tvopt: run, sweep and bound prediction-correction trackers from JSON configs.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvopt/bounds.hpp"
#include "tvopt/config.hpp"
#include "tvopt/errors.hpp"
#include "tvopt/harness.hpp"
#include "tvopt/tracker.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string out_dir;
  unsigned jobs = 0;
  bool quiet = false;
};

bool is_numerical(tvopt::ErrorCode code) {
  using tvopt::ErrorCode;
  return code == ErrorCode::NonFinite || code == ErrorCode::NotPositiveDefinite || code == ErrorCode::NoConvergence;
}

int exit_code_for(const tvopt::Error& e) { return is_numerical(e.code()) ? kExitNumeric : kExitConfig; }

void info(const Options& opt, const std::string& msg) {
  if (!opt.quiet) std::cerr << msg << '\n';
}

fs::path output_dir(const Options& opt) {
  fs::path dir = opt.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("TVOPT_OUT");
    dir = env && *env ? fs::path(env) : fs::path(".");
  }
  fs::create_directories(dir);
  return dir;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw tvopt::Error(tvopt::ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::optional<tvopt::BoundReport> try_bounds(const tvopt::SolverConfig& cfg, const tvopt::TimeVaryingObjective& obj,
                                             std::optional<double> newton_c) {
  if (!obj.constants) return std::nullopt;
  const auto kind = tvopt::prediction_mode(cfg.variant) == tvopt::PredictionMode::BackwardDifference
                        ? tvopt::PredictionKind::BackwardDifference
                        : tvopt::PredictionKind::Exact;
  try {
    return tvopt::bound_report(cfg.tau, cfg.gamma, cfg.h, *obj.constants, newton_c, kind);
  } catch (const tvopt::Error&) {
    return std::nullopt;
  }
}

int cmd_init(const Options& opt, const std::string& example, const std::string& target) {
  const std::string text = tvopt::example_config(example);
  fs::path path = target;
  if (path.empty()) {
    std::string stem = example;
    std::replace(stem.begin(), stem.end(), '-', '_');
    path = output_dir(opt) / (stem + ".json");
  }
  write_file(path, text);
  info(opt, "wrote " + path.string());
  return kExitOk;
}

int cmd_run(const Options& opt, const fs::path& config_path) {
  const tvopt::ExperimentSpec spec = tvopt::load_experiment(config_path);
  if (!spec.h) throw tvopt::Error(tvopt::ErrorCode::InvalidConfig, config_path.string() + ": h: missing (needed by run)");
  const double h = *spec.h;
  double horizon = 0.0;
  for (const auto& s : spec.solvers) horizon = std::max(horizon, s.config.t0 + s.config.steps * h);
  const tvopt::TimeVaryingObjective obj = tvopt::build_problem(spec.problem, horizon);

  std::vector<tvopt::SolverConfig> configs;
  for (const auto& s : spec.solvers) configs.push_back(tvopt::resolve_config(s, obj, h));

  const std::size_t n = configs.size();
  std::vector<tvopt::TrajectoryLog> logs(n);
  std::vector<std::exception_ptr> failures(n);
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    try {
      logs[i] = tvopt::run(obj, configs[i]);
    } catch (const tvopt::RunError& e) {
      logs[i] = e.partial_log();
      failures[i] = std::current_exception();
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });

  // Config-type failures abort before any output is written.
  for (const auto& f : failures) {
    if (!f) continue;
    try {
      std::rethrow_exception(f);
    } catch (const tvopt::Error& e) {
      if (!is_numerical(e.code())) throw;
    }
  }

  const fs::path dir = output_dir(opt);
  const std::string stem = config_path.stem().string();
  std::vector<std::string> labels;
  for (const auto& s : spec.solvers) labels.push_back(s.name());
  {
    std::ofstream csv(dir / (stem + "_timeseries.csv"));
    tvopt::write_timeseries_csv(csv, spec.name, logs, labels);
  }

  int code = kExitOk;
  json summary;
  summary["experiment"] = spec.name;
  summary["generated_at"] = utc_timestamp();
  summary["config"] = config_path.string();
  summary["problem"] = spec.problem.kind;
  summary["h"] = h;
  summary["kbar"] = spec.kbar;
  json runs = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json r;
    r["label"] = labels[i];
    r["variant"] = std::string(tvopt::to_string(configs[i].variant));
    r["tau"] = logs[i].tau;
    r["gamma"] = configs[i].gamma;
    r["steps"] = configs[i].steps;
    if (failures[i]) {
      code = kExitNumeric;
      try {
        std::rethrow_exception(failures[i]);
      } catch (const std::exception& e) {
        r["status"] = "failed";
        r["error"] = e.what();
        std::cerr << "error: " << labels[i] << ": " << e.what() << '\n';
      }
    } else {
      r["status"] = "ok";
    }
    r["samples"] = logs[i].records.size();
    r["final_error"] = logs[i].records.empty() ? json(nullptr) : number_or_null(logs[i].records.back().err);
    try {
      r["worst_case_error"] = number_or_null(tvopt::worst_case_error(logs[i], spec.kbar));
    } catch (const tvopt::Error&) {
      r["worst_case_error"] = nullptr;
    }
    r["switch_k"] = logs[i].switch_k ? json(*logs[i].switch_k) : json(nullptr);
    if (configs[i].hybrid_c) r["hybrid_c"] = *configs[i].hybrid_c;
    tvopt::SolverConfig effective = configs[i];
    effective.tau = logs[i].tau;
    const auto report = try_bounds(effective, obj, spec.newton_c);
    r["bounds"] = report ? json::parse(tvopt::bound_report_json(*report)) : json(nullptr);
    runs.push_back(std::move(r));
  }
  summary["runs"] = std::move(runs);
  summary["status"] = code == kExitOk ? "ok" : "failed";
  write_file(dir / (stem + "_summary.json"), summary.dump(2) + "\n");
  info(opt, "wrote " + (dir / (stem + "_timeseries.csv")).string() + " and " + (dir / (stem + "_summary.json")).string());
  return code;
}

int cmd_sweep(const Options& opt, const fs::path& config_path) {
  const tvopt::ExperimentSpec spec = tvopt::load_experiment(config_path);
  if (spec.h_grid.empty()) {
    throw tvopt::Error(tvopt::ErrorCode::InvalidConfig, config_path.string() + ": h_grid: empty or missing");
  }
  tvopt::SweepResult result;
  std::optional<std::string> failure;
  int code = kExitOk;
  try {
    result = tvopt::run_sweep(spec, opt.jobs);
  } catch (const tvopt::SweepError& e) {
    if (!is_numerical(e.code())) throw;
    result = e.partial_result();
    failure = e.what();
    code = kExitNumeric;
    std::cerr << "error: " << e.what() << '\n';
  }

  const fs::path dir = output_dir(opt);
  const std::string stem = config_path.stem().string();
  {
    std::ofstream csv(dir / (stem + "_sweep.csv"));
    tvopt::write_sweep_csv(csv, result);
  }

  json summary;
  summary["experiment"] = spec.name;
  summary["generated_at"] = utc_timestamp();
  summary["config"] = config_path.string();
  summary["problem"] = spec.problem.kind;
  summary["kbar"] = spec.kbar;
  summary["h_grid"] = spec.h_grid;
  json series = json::array();
  json schedule = json::object();
  for (const auto& solver : spec.solvers) {
    json row;
    row["label"] = solver.name();
    row["variant"] = std::string(tvopt::to_string(solver.config.variant));
    json taus = json::array();
    json worst = json::array();
    json slope = nullptr;
    for (double h : spec.h_grid) {
      const auto it = std::find_if(result.cells.begin(), result.cells.end(), [&](const tvopt::SweepCell& c) {
        return c.variant == solver.name() && c.h == h;
      });
      if (it == result.cells.end()) {
        taus.push_back(nullptr);
        worst.push_back("failed");
        continue;
      }
      taus.push_back(it->tau ? json(*it->tau) : json("-"));
      worst.push_back(it->worst_case_error ? number_or_null(*it->worst_case_error) : json("infeasible"));
      slope = number_or_null(it->slope);
    }
    row["slope"] = slope;
    row["tau"] = taus;
    row["worst_case_error"] = worst;
    if (solver.config.budget) {
      json budget_taus = json::array();
      for (double h : spec.h_grid) {
        const auto t = tvopt::budget_tau(*solver.config.budget, solver.config.variant, h);
        budget_taus.push_back(t ? json(*t) : json("-"));
      }
      schedule[solver.name()] = std::move(budget_taus);
    }
    series.push_back(std::move(row));
  }
  summary["series"] = std::move(series);
  if (!schedule.empty()) summary["tau_schedule"] = std::move(schedule);
  summary["status"] = failure ? "failed" : "ok";
  if (failure) summary["error"] = *failure;
  write_file(dir / (stem + "_summary.json"), summary.dump(2) + "\n");
  info(opt, "wrote " + (dir / (stem + "_sweep.csv")).string() + " and " + (dir / (stem + "_summary.json")).string());
  return code;
}

int cmd_bounds(const fs::path& config_path) {
  const tvopt::ExperimentSpec spec = tvopt::load_experiment(config_path);
  const double h = spec.h.value_or(spec.h_grid.empty() ? 0.0 : spec.h_grid.front());
  long long steps = 0;
  for (const auto& s : spec.solvers) steps = std::max(steps, s.config.steps);
  const tvopt::TimeVaryingObjective obj = tvopt::build_problem(spec.problem, h * static_cast<double>(steps));
  const tvopt::BoundReport report =
      tvopt::bound_report(spec.tau, spec.gamma, h, obj.require_constants(), spec.newton_c);
  std::cout << tvopt::bound_report_json(report) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-correction tracking of time-varying convex programs"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--out", opt.out_dir, "Output directory (default: $TVOPT_OUT or .)");
  app.add_option("--jobs", opt.jobs, "Parallel runs (default: number of cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--quiet", opt.quiet, "Suppress warnings and progress messages");

  std::string example;
  std::string init_target;
  auto* init = app.add_subcommand("init", "Write a built-in example config");
  init->add_option("--example", example, "scalar-a | scalar-b | tracking | budget")->required();
  init->add_option("path", init_target, "Target file (default: <out>/<example>.json)");

  std::string config;
  auto* run = app.add_subcommand("run", "Run every solver of a config once; write time series and summary");
  run->add_option("config", config, "Experiment config (JSON)")->required();
  auto* sweep = app.add_subcommand("sweep", "Sweep the config's h_grid; write sweep CSV and summary");
  sweep->add_option("config", config, "Experiment config (JSON)")->required();
  auto* bounds = app.add_subcommand("bounds", "Print the bound report for the config's h, gamma and tau");
  bounds->add_option("config", config, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (opt.quiet) tvopt::set_warning_handler({});

  try {
    if (*init) return cmd_init(opt, example, init_target);
    if (*run) return cmd_run(opt, config);
    if (*sweep) return cmd_sweep(opt, config);
    if (*bounds) return cmd_bounds(config);
  } catch (const tvopt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}
