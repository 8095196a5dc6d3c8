#include "tvopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "tvopt/errors.hpp"
#include "tvopt/oracle.hpp"

namespace tvopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  // std::stod rejects out-of-range values; strtod handles inf and denormals
  if (used != s.size() || s.empty()) {
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
      throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
    }
  }
  return v;
}

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

bool operator==(const SweepCell& a, const SweepCell& b) {
  const bool wce = a.worst_case_error.has_value() == b.worst_case_error.has_value() &&
                   (!a.worst_case_error || same_value(*a.worst_case_error, *b.worst_case_error));
  return a.variant == b.variant && a.tau == b.tau && same_value(a.h, b.h) && wce && same_value(a.slope, b.slope) &&
         same_value(a.envelope, b.envelope);
}

TimeVaryingObjective build_problem(const ProblemSpec& spec, double horizon) {
  if (spec.kind == "scalar") return make_scalar_problem(spec.scalar);
  if (spec.kind == "tracking") {
    return make_tracking_problem(spec.tracking, lissajous_reference_path(spec.tracking.omega));
  }
  if (spec.kind == "quadratic") {
    const QuadraticSpec& q = spec.quadratic;
    const Curve drift = q.drift == "sine" ? sine_drift(q.amplitude, q.frequency) : linear_drift(q.offset, q.rate);
    if (q.drift != "sine" && q.drift != "linear") {
      throw Error(ErrorCode::InvalidArgument, "unknown drift kind '" + q.drift + "'");
    }
    return make_quadratic_problem(q.n, drift, horizon);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem kind '" + spec.kind + "'");
}

std::string SolverSpec::name() const { return label.empty() ? std::string(to_string(config.variant)) : label; }

void ExperimentSpec::validate(bool require_grid) const {
  if (solvers.empty()) throw Error(ErrorCode::InvalidArgument, "experiment has no solvers");
  for (const SolverSpec& s : solvers) {
    if (kbar < 0 || kbar >= s.config.steps) {
      throw Error(ErrorCode::InvalidArgument, "kbar must satisfy 0 <= kbar < steps");
    }
  }
  if (require_grid && h_grid.empty()) throw Error(ErrorCode::InvalidArgument, "h_grid is empty");
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    if (!(h_grid[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "h_grid entries must be positive");
    if (i > 0 && !(h_grid[i] > h_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "h_grid must be strictly increasing");
    }
  }
}

SolverConfig resolve_config(const SolverSpec& solver, const TimeVaryingObjective& obj, double h) {
  SolverConfig cfg = solver.config;
  cfg.h = h;
  if (cfg.variant == Variant::Hybrid && solver.hybrid_c_scale) {
    const HybridConstants hc = hybrid_constants(cfg.tau, cfg.gamma, h, obj.require_constants());
    cfg.hybrid_c = *solver.hybrid_c_scale * hc.c_min;
  }
  return cfg;
}

double worst_case_error(const TrajectoryLog& log, long long kbar) {
  double worst = -1.0;
  for (const StepRecord& r : log.records) {
    if (r.k > kbar) worst = std::max(worst, r.err);
  }
  if (worst < 0.0) {
    throw Error(ErrorCode::TooShort, "no samples beyond kbar = " + std::to_string(kbar));
  }
  return worst;
}

SlopeFit loglog_fit(const std::vector<std::pair<double, double>>& pairs, double clamp_floor) {
  if (pairs.size() < 3) throw Error(ErrorCode::InvalidArgument, "slope fit needs at least 3 points");
  std::vector<double> lx;
  std::vector<double> ly;
  for (auto [h, e] : pairs) {
    if (!(h > 0.0)) throw Error(ErrorCode::NonPositive, "slope fit needs positive h");
    if (clamp_floor > 0.0) e = std::max(e, clamp_floor);
    if (!(e > 0.0)) throw Error(ErrorCode::NonPositive, "slope fit got a non-positive error");
    lx.push_back(std::log(h));
    ly.push_back(std::log(e));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two distinct h");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

double loglog_slope(const std::vector<std::pair<double, double>>& pairs, double clamp_floor) {
  return loglog_fit(pairs, clamp_floor).slope;
}

double asymptotic_envelope(const SolverConfig& config, const TimeVaryingObjective& obj,
                           std::optional<double> newton_c) {
  if (!obj.constants || config.v_max || config.budget) return kNaN;
  const SmoothnessConstants& c = *obj.constants;
  switch (config.variant) {
    case Variant::GTT:
    case Variant::AGT: {
      if (!(contraction_factor(config.gamma, c.m, c.L) < 1.0)) return kNaN;
      const auto kind = config.variant == Variant::AGT ? PredictionKind::BackwardDifference : PredictionKind::Exact;
      const GradientEnvelope e = gradient_tracking_envelope(0, config.tau, config.h, config.gamma, c, 0.0, kind);
      return e.asymptotic_oh2 ? *e.asymptotic_oh2 : e.asymptotic_oh;
    }
    case Variant::NTT:
    case Variant::ANT: {
      if (!newton_c || !(c.C1 > 0.0)) return kNaN;
      const auto kind = config.variant == Variant::ANT ? PredictionKind::BackwardDifference : PredictionKind::Exact;
      const NewtonCheck chk = newton_tracking_check(*newton_c, config.tau, config.h, c, kind);
      return chk.admissible ? chk.floor : kNaN;
    }
    default:
      return kNaN;
  }
}

SweepResult run_sweep(const ExperimentSpec& spec, unsigned jobs) {
  spec.validate(true);
  double horizon = 0.0;
  for (const SolverSpec& s : spec.solvers) {
    horizon = std::max(horizon, s.config.t0 + static_cast<double>(s.config.steps) * spec.h_grid.back());
  }
  const TimeVaryingObjective obj = build_problem(spec.problem, horizon);

  const std::size_t n_h = spec.h_grid.size();
  const std::size_t n_cells = spec.solvers.size() * n_h;
  std::vector<SweepCell> cells(n_cells);
  std::vector<std::exception_ptr> failures(n_cells);

  auto run_cell = [&](std::size_t i) {
    const SolverSpec& solver = spec.solvers[i / n_h];
    const double h = spec.h_grid[i % n_h];
    SweepCell& cell = cells[i];
    cell.variant = solver.name();
    cell.h = h;
    cell.slope = kNaN;
    cell.envelope = kNaN;
    try {
      SolverConfig cfg = resolve_config(solver, obj, h);
      if (cfg.budget && !budget_tau(*cfg.budget, cfg.variant, h)) return;  // infeasible cell
      const TrajectoryLog log = run(obj, cfg);
      cell.tau = log.tau;
      cell.worst_case_error = worst_case_error(log, spec.kbar);
      cfg.tau = log.tau;
      cell.envelope = asymptotic_envelope(cfg, obj, spec.newton_c);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_cells));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_cells; i = next++) run_cell(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<bool> ok(n_cells, true);
  for (std::size_t i = 0; i < n_cells; ++i) ok[i] = !failures[i];

  for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
    std::vector<std::pair<double, double>> pairs;
    bool complete = true;
    for (std::size_t j = 0; j < n_h; ++j) {
      const SweepCell& c = cells[s * n_h + j];
      complete = complete && ok[s * n_h + j];
      if (ok[s * n_h + j] && c.worst_case_error) pairs.emplace_back(c.h, *c.worst_case_error);
    }
    if (!complete || pairs.size() < 3) continue;
    const double slope = loglog_slope(pairs, kOracleTolerance);
    for (std::size_t j = 0; j < n_h; ++j) cells[s * n_h + j].slope = slope;
  }

  for (std::size_t i = 0; i < n_cells; ++i) {
    if (!failures[i]) continue;
    SweepResult partial{spec.name, {}};
    for (std::size_t j = 0; j < n_cells; ++j) {
      if (ok[j]) partial.cells.push_back(cells[j]);
    }
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw SweepError(e, cells[i].variant + " at h = " + format_double(cells[i].h), std::move(partial));
    }
  }
  return SweepResult{spec.name, std::move(cells)};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_timeseries_csv(std::ostream& out, const std::string& experiment, const std::vector<TrajectoryLog>& logs,
                          const std::vector<std::string>& labels) {
  std::size_t n = 0;
  for (const TrajectoryLog& log : logs) {
    if (!log.records.empty()) {
      n = log.records.front().x.size();
      break;
    }
  }
  out << kTimeseriesHeader;
  for (std::size_t i = 0; i < n; ++i) out << ",x" << i;
  for (std::size_t i = 0; i < n; ++i) out << ",xs" << i;
  out << '\n';
  for (std::size_t li = 0; li < logs.size(); ++li) {
    const TrajectoryLog& log = logs[li];
    const std::string label = li < labels.size() && !labels[li].empty() ? labels[li] : std::string(to_string(log.variant));
    const std::string prefix = experiment + ',' + label + ',' + std::to_string(log.tau) + ',' + format_double(log.h) +
                               ',' + format_double(log.gamma) + ',';
    for (const StepRecord& r : log.records) {
      out << prefix << r.k << ',' << format_double(r.t) << ',' << format_double(r.err) << ','
          << format_double(r.pred_err) << ',' << format_double(r.grad_norm) << ',' << format_double(r.bound_env)
          << ',' << (r.switched ? 1 : 0);
      if (r.x.size() != n || r.x_star.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "logs in one CSV must share a state dimension");
      }
      for (double v : r.x) out << ',' << format_double(v);
      for (double v : r.x_star) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepHeader << '\n';
  for (const SweepCell& c : result.cells) {
    out << result.experiment << ',' << c.variant << ',' << (c.tau ? std::to_string(*c.tau) : "-") << ','
        << format_double(c.h) << ',' << (c.worst_case_error ? format_double(*c.worst_case_error) : "infeasible")
        << ',' << format_double(c.slope) << ',' << format_double(c.envelope) << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw Error(ErrorCode::InvalidArgument, "sweep CSV header mismatch");
  }
  SweepResult result;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw Error(ErrorCode::InvalidArgument, "sweep CSV row has " + std::to_string(f.size()) + " fields");
    if (first) {
      result.experiment = f[0];
      first = false;
    } else if (f[0] != result.experiment) {
      throw Error(ErrorCode::InvalidArgument, "sweep CSV mixes experiments");
    }
    SweepCell c;
    c.variant = f[1];
    if (f[2] != "-") c.tau = std::stoi(f[2]);
    c.h = parse_double(f[3]);
    if (f[4] != "infeasible") c.worst_case_error = parse_double(f[4]);
    c.slope = parse_double(f[5]);
    c.envelope = parse_double(f[6]);
    result.cells.push_back(std::move(c));
  }
  return result;
}

}  // namespace tvopt
