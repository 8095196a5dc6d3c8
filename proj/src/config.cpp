#include "tvopt/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tvopt/errors.hpp"

namespace tvopt {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::InvalidConfig, (path.empty() ? std::string("config") : path) + ": " + msg);
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "expected a number");
  return v.get<double>();
}

double require_number(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(join(path, key), "missing");
  return get_number(obj, path, key, 0.0);
}

long long get_integer(const json& obj, const std::string& path, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
  return v.get<long long>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "expected a string");
  return v.get<std::string>();
}

Vector get_vector(const json& obj, const std::string& path, const char* key, const Vector& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.empty()) fail(join(path, key), "expected a non-empty array of numbers");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(join(path, key), "expected a non-empty array of numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

SmoothnessConstants parse_constants(const json& j, const std::string& path) {
  allow_keys(j, path, {"m", "L", "C0", "C1", "C2", "C3"});
  SmoothnessConstants c;
  c.m = require_number(j, path, "m");
  c.L = require_number(j, path, "L");
  c.C0 = require_number(j, path, "C0");
  c.C1 = require_number(j, path, "C1");
  c.C2 = require_number(j, path, "C2");
  c.C3 = require_number(j, path, "C3");
  return c;
}

ProblemSpec parse_problem(const json& j) {
  const std::string path = "problem";
  if (!j.is_object()) fail(path, "expected an object");
  ProblemSpec p;
  p.kind = get_string(j, path, "kind", "");
  if (p.kind == "scalar") {
    allow_keys(j, path, {"kind", "omega", "kappa", "mu"});
    p.scalar.omega = get_number(j, path, "omega", p.scalar.omega);
    p.scalar.kappa = get_number(j, path, "kappa", p.scalar.kappa);
    p.scalar.mu = get_number(j, path, "mu", p.scalar.mu);
  } else if (p.kind == "tracking") {
    allow_keys(j, path, {"kind", "mu1", "mu2", "base", "omega", "domain_lower", "domain_upper", "constants"});
    TrackingProblemParams& t = p.tracking;
    t.mu1 = get_number(j, path, "mu1", t.mu1);
    t.mu2 = get_number(j, path, "mu2", t.mu2);
    t.base = get_vector(j, path, "base", t.base);
    t.omega = get_number(j, path, "omega", t.omega);
    t.domain_lower = get_vector(j, path, "domain_lower", t.domain_lower);
    t.domain_upper = get_vector(j, path, "domain_upper", t.domain_upper);
    if (j.contains("constants")) {
      if (j.at("constants").is_null()) {
        t.constants.reset();
      } else {
        t.constants = parse_constants(j.at("constants"), "problem.constants");
      }
    }
  } else if (p.kind == "quadratic") {
    allow_keys(j, path, {"kind", "n", "drift"});
    QuadraticSpec& q = p.quadratic;
    const long long n = get_integer(j, path, "n", 1);
    if (n < 1) fail("problem.n", "must be >= 1");
    q.n = static_cast<std::size_t>(n);
    q.offset = Vector(q.n);
    q.rate = Vector(q.n, 1.0);
    q.amplitude = Vector(q.n, 1.0);
    if (j.contains("drift")) {
      const json& d = j.at("drift");
      const std::string dp = "problem.drift";
      if (!d.is_object()) fail(dp, "expected an object");
      q.drift = get_string(d, dp, "kind", "linear");
      if (q.drift == "linear") {
        allow_keys(d, dp, {"kind", "offset", "rate"});
        q.offset = get_vector(d, dp, "offset", q.offset);
        q.rate = get_vector(d, dp, "rate", q.rate);
      } else if (q.drift == "sine") {
        allow_keys(d, dp, {"kind", "amplitude", "frequency"});
        q.amplitude = get_vector(d, dp, "amplitude", q.amplitude);
        q.frequency = get_number(d, dp, "frequency", q.frequency);
      } else {
        fail(dp + ".kind", "expected \"linear\" or \"sine\"");
      }
    }
    const std::size_t len = q.drift == "sine" ? q.amplitude.size() : q.offset.size();
    if (len != q.n || (q.drift == "linear" && q.rate.size() != q.n)) fail("problem.drift", "length differs from n");
  } else {
    fail("problem.kind", "expected \"scalar\", \"tracking\" or \"quadratic\"");
  }
  return p;
}

BudgetSchedule parse_budget(const json& j, const std::string& path) {
  allow_keys(j, path,
             {"grad_eval_cost", "hessian_cost_multiplier", "correction_time_fraction", "refinement_time",
              "refinement_policy"});
  BudgetSchedule b;
  b.grad_eval_cost = get_number(j, path, "grad_eval_cost", b.grad_eval_cost);
  b.hessian_cost_multiplier = get_number(j, path, "hessian_cost_multiplier", b.hessian_cost_multiplier);
  b.correction_time_fraction = get_number(j, path, "correction_time_fraction", b.correction_time_fraction);
  b.refinement_time = get_number(j, path, "refinement_time", b.refinement_time);
  if (j.contains("refinement_policy")) {
    try {
      b.refinement_policy = parse_refinement_policy(get_string(j, path, "refinement_policy", ""));
    } catch (const Error&) {
      fail(join(path, "refinement_policy"), "expected extra_gradients, extra_newton or prediction");
    }
  }
  return b;
}

SaturationMode parse_saturation(const std::string& s, const std::string& path) {
  if (s == "net") return SaturationMode::NetDisplacement;
  if (s == "separate") return SaturationMode::SeparatePhases;
  fail(path, "expected \"net\" or \"separate\"");
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  allow_keys(root, "",
             {"version", "name", "problem", "solvers", "h", "gamma", "tau", "steps", "kbar", "x0", "t0", "v_max",
              "saturation", "budget", "h_grid", "newton_c", "backtracking"});
  if (!root.contains("version")) fail("version", "missing");
  if (get_integer(root, "", "version", 0) != kConfigVersion) {
    fail("version", "unsupported (expected " + std::to_string(kConfigVersion) + ")");
  }

  ExperimentSpec spec;
  spec.name = get_string(root, "", "name", spec.name);
  if (spec.name.empty() || spec.name.find_first_of(",\n\r\"") != std::string::npos) {
    fail("name", "must be non-empty and free of commas, quotes and newlines");
  }
  if (!root.contains("problem")) fail("problem", "missing");
  spec.problem = parse_problem(root.at("problem"));

  if (root.contains("h")) spec.h = get_number(root, "", "h", 0.0);
  spec.gamma = get_number(root, "", "gamma", spec.gamma);
  spec.tau = static_cast<int>(get_integer(root, "", "tau", spec.tau));
  const long long steps = get_integer(root, "", "steps", 0);
  if (!root.contains("steps")) fail("steps", "missing");
  spec.kbar = get_integer(root, "", "kbar", steps / 2);
  if (root.contains("newton_c")) spec.newton_c = get_number(root, "", "newton_c", 0.0);
  if (root.contains("h_grid")) {
    const json& g = root.at("h_grid");
    if (!g.is_array()) fail("h_grid", "expected an array of numbers");
    for (const json& v : g) {
      if (!v.is_number()) fail("h_grid", "expected an array of numbers");
      spec.h_grid.push_back(v.get<double>());
    }
  }

  SolverConfig base;
  base.h = spec.h.value_or(spec.h_grid.empty() ? 0.0 : spec.h_grid.front());
  base.gamma = spec.gamma;
  base.tau = spec.tau;
  base.steps = steps;
  base.t0 = get_number(root, "", "t0", 0.0);
  base.backtracking = get_bool(root, "", "backtracking", false);
  if (!root.contains("x0")) fail("x0", "missing");
  base.x0 = get_vector(root, "", "x0", {});
  if (root.contains("v_max")) base.v_max = get_number(root, "", "v_max", 0.0);
  base.saturation = parse_saturation(get_string(root, "", "saturation", "net"), "saturation");
  if (root.contains("budget")) base.budget = parse_budget(root.at("budget"), "budget");

  if (!root.contains("solvers") || !root.at("solvers").is_array() || root.at("solvers").empty()) {
    fail("solvers", "expected a non-empty array");
  }
  const json& solvers = root.at("solvers");
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    const std::string path = "solvers[" + std::to_string(i) + "]";
    const json& s = solvers[i];
    allow_keys(s, path, {"variant", "label", "tau", "gamma", "hybrid_c", "hybrid_c_scale", "refinement_policy"});
    SolverSpec solver;
    solver.config = base;
    try {
      solver.config.variant = parse_variant(get_string(s, path, "variant", ""));
    } catch (const Error&) {
      fail(join(path, "variant"), "expected one of GTT, NTT, AGT, ANT, RG, RN, Hybrid");
    }
    solver.label = get_string(s, path, "label", "");
    if (solver.label.find_first_of(",\n\r\"") != std::string::npos) fail(join(path, "label"), "invalid character");
    solver.config.tau = static_cast<int>(get_integer(s, path, "tau", base.tau));
    solver.config.gamma = get_number(s, path, "gamma", base.gamma);
    if (s.contains("hybrid_c")) solver.config.hybrid_c = get_number(s, path, "hybrid_c", 0.0);
    if (s.contains("hybrid_c_scale")) solver.hybrid_c_scale = get_number(s, path, "hybrid_c_scale", 0.0);
    if (solver.config.hybrid_c && solver.hybrid_c_scale) {
      fail(path, "give either hybrid_c or hybrid_c_scale, not both");
    }
    if (solver.config.variant == Variant::Hybrid && !solver.config.hybrid_c && !solver.hybrid_c_scale) {
      fail(path, "Hybrid needs hybrid_c or hybrid_c_scale");
    }
    if (solver.hybrid_c_scale && !(*solver.hybrid_c_scale > 1.0)) {
      fail(join(path, "hybrid_c_scale"), "must exceed 1 (c must be above c_min)");
    }
    if (s.contains("refinement_policy")) {
      if (!solver.config.budget) fail(join(path, "refinement_policy"), "only valid with a budget");
      try {
        solver.config.budget->refinement_policy = parse_refinement_policy(get_string(s, path, "refinement_policy", ""));
      } catch (const Error&) {
        fail(join(path, "refinement_policy"), "expected extra_gradients, extra_newton or prediction");
      }
    }
    // A provisional hybrid_c lets validate() pass; the real value is resolved per h.
    SolverConfig check = solver.config;
    if (solver.hybrid_c_scale) check.hybrid_c = 1.0;
    if (!(check.h > 0.0)) check.h = 1.0;
    try {
      check.validate();
    } catch (const Error& e) {
      fail(path, e.detail());
    }
    spec.solvers.push_back(std::move(solver));
  }

  try {
    spec.validate(false);
  } catch (const Error& e) {
    fail("", e.detail());
  }
  if (spec.h && !(*spec.h > 0.0)) fail("h", "must be positive");
  if (!spec.h && spec.h_grid.empty()) fail("h", "give h or h_grid");
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_experiment(ss.str());
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.detail());
  }
}

std::vector<std::string> example_names() { return {"scalar-a", "scalar-b", "tracking", "budget"}; }

namespace {

json scalar_example(const std::string& name, double kappa, double mu, double gamma) {
  json j;
  j["version"] = kConfigVersion;
  j["name"] = name;
  j["problem"] = {{"kind", "scalar"}, {"omega", 0.02 * std::numbers::pi}, {"kappa", kappa}, {"mu", mu}};
  j["h"] = 0.1;
  j["gamma"] = gamma;
  j["tau"] = 1;
  j["steps"] = 20000;
  j["kbar"] = 10000;
  j["x0"] = {0.0};
  j["newton_c"] = 0.05;
  j["h_grid"] = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
  j["solvers"] = json::array({
      {{"variant", "RG"}},
      {{"variant", "GTT"}, {"tau", 1}},
      {{"variant", "GTT"}, {"tau", 3}, {"label", "GTT-3"}},
      {{"variant", "GTT"}, {"tau", 5}, {"label", "GTT-5"}},
      {{"variant", "AGT"}},
      {{"variant", "NTT"}},
      {{"variant", "Hybrid"}, {"hybrid_c_scale", 2.0}},
  });
  return j;
}

json tracking_base(const std::string& name) {
  json j;
  j["version"] = kConfigVersion;
  j["name"] = name;
  j["problem"] = {{"kind", "tracking"},
                  {"mu1", 1000.0},
                  {"mu2", 0.005},
                  {"base", {100.0, 100.0}},
                  {"omega", 0.01},
                  {"domain_lower", {-150.0, -150.0}},
                  {"domain_upper", {150.0, 150.0}},
                  {"constants", {{"m", 1.01}, {"L", 3.45}, {"C0", 3.16}, {"C1", 0.06}, {"C2", 0.0}, {"C3", 0.10}}}};
  j["h"] = 1.0;
  j["gamma"] = 0.05;
  j["tau"] = 1;
  j["steps"] = 16000;
  j["kbar"] = 8000;
  j["x0"] = {100.0, 100.0};
  j["v_max"] = 4.0;
  j["h_grid"] = {1.0 / 10, 1.0 / 4, 1.0 / 3, 1.0 / 2, 2.0 / 3, 3.0 / 4, 1.0};
  return j;
}

}  // namespace

std::string example_config(std::string_view name) {
  json j;
  if (name == "scalar-a") {
    j = scalar_example("scalar_a", 7.5, 1.75, 0.2);
  } else if (name == "scalar-b") {
    j = scalar_example("scalar_b", 0.1, 0.5, 1.0);
  } else if (name == "tracking") {
    j = tracking_base("tracking");
    j["solvers"] = json::array({
        {{"variant", "RG"}},
        {{"variant", "AGT"}, {"tau", 1}},
        {{"variant", "AGT"}, {"tau", 3}, {"label", "AGT-3"}},
        {{"variant", "AGT"}, {"tau", 5}, {"label", "AGT-5"}},
        {{"variant", "ANT"}, {"tau", 1}},
    });
  } else if (name == "budget") {
    j = tracking_base("budget");
    j["budget"] = {{"grad_eval_cost", 1.0 / 120},
                   {"hessian_cost_multiplier", 2.0},
                   {"correction_time_fraction", 0.1},
                   {"refinement_time", 1.0 / 40},
                   {"refinement_policy", "prediction"}};
    j["solvers"] = json::array({
        {{"variant", "RG"}, {"label", "RG+3G"}, {"refinement_policy", "extra_gradients"}},
        {{"variant", "RG"}, {"label", "RG+1N"}, {"refinement_policy", "extra_newton"}},
        {{"variant", "RN"}, {"label", "RN+1N"}, {"refinement_policy", "extra_newton"}},
        {{"variant", "AGT"}},
        {{"variant", "ANT"}},
    });
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown example '" + std::string(name) +
                                              "' (expected scalar-a, scalar-b, tracking or budget)");
  }
  return j.dump(2) + "\n";
}

std::string bound_report_json(const BoundReport& r, int indent) {
  auto num = [](double v) -> json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
  };
  auto opt = [&](const std::optional<double>& v) -> json { return v ? num(*v) : json(nullptr); };
  json j;
  j["rho"] = num(r.rho);
  j["sigma"] = num(r.sigma);
  j["gamma_trunc"] = num(r.gamma_trunc);
  j["gamma2"] = num(r.gamma2);
  j["delta1"] = num(r.delta1);
  j["delta2"] = num(r.delta2);
  j["delta2_prime"] = num(r.delta2_prime);
  j["Q"] = r.Q ? num(*r.Q) : json("quadratic");
  j["h_max_oh2"] = num(r.h_max_oh2);
  j["h_max_newton"] = opt(r.h_max_newton);
  j["asymptotic_oh"] = num(r.asymptotic_oh);
  j["asymptotic_oh2"] = opt(r.asymptotic_oh2);
  j["newton_floor"] = opt(r.newton_floor);
  j["c_min"] = opt(r.c_min);
  return j.dump(indent);
}

}  // namespace tvopt
