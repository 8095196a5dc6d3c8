#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "support.hpp"
#include "tvopt/bounds.hpp"
#include "tvopt/errors.hpp"
#include "tvopt/oracle.hpp"
#include "tvopt/problems.hpp"
#include "tvopt/tracker.hpp"

using namespace tvopt;

namespace {

SolverConfig scalar_config(Variant v, long long steps = 400) {
  SolverConfig cfg;
  cfg.variant = v;
  cfg.h = 0.1;
  cfg.gamma = 0.2;
  cfg.tau = 1;
  cfg.steps = steps;
  cfg.x0 = Vector{0.0};
  return cfg;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

double tail_max(const TrajectoryLog& log, long long from) {
  double m = 0.0;
  for (const auto& r : log.records)
    if (r.k > from) m = std::max(m, r.err);
  return m;
}

// Captures warnings for the lifetime of the object.
struct WarningCapture {
  std::vector<std::string> messages;
  WarningCapture() {
    set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~WarningCapture() { set_warning_handler([](std::string_view) {}); }
};

}  // namespace

TEST_CASE("variant names round-trip") {
  for (Variant v : {Variant::GTT, Variant::NTT, Variant::AGT, Variant::ANT, Variant::RG, Variant::RN,
                    Variant::Hybrid}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_variant("gtt"), Error);
  for (auto p : {RefinementPolicy::ExtraGradients, RefinementPolicy::ExtraNewton, RefinementPolicy::Prediction}) {
    CHECK(parse_refinement_policy(to_string(p)) == p);
  }
}

TEST_CASE("saturate_motion") {
  const Vector a = saturate_motion(Vector{0.0, 0.0}, Vector{3.0, 4.0}, 4.0, 1.0);
  CHECK(a[0] == doctest::Approx(2.4));
  CHECK(a[1] == doctest::Approx(3.2));
  const Vector b = saturate_motion(Vector{1.0, 1.0}, Vector{2.0, 2.0}, 4.0, 1.0);
  CHECK(b[0] == 2.0);
  CHECK(b[1] == 2.0);
  const Vector c = saturate_motion(Vector{0.0, 0.0}, Vector{0.0, 4.0}, 4.0, 1.0);
  CHECK(c[1] == 4.0);
  CHECK_THROWS_AS(saturate_motion(Vector{0.0}, Vector{1.0}, 0.0, 1.0), Error);
}

TEST_CASE("budget_tau reproduces the step-count table") {
  const BudgetSchedule s;
  const std::vector<double> hs{0.1, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.75, 1.0};
  const std::vector<int> grad{1, 3, 4, 6, 8, 9, 12};
  const std::vector<int> newton{0, 1, 1, 2, 2, 3, 4};
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (Variant v : {Variant::RG, Variant::AGT, Variant::GTT}) CHECK(budget_tau(s, v, hs[i]) == grad[i]);
    for (Variant v : {Variant::RN, Variant::ANT, Variant::NTT}) {
      const auto tau = budget_tau(s, v, hs[i]);
      if (newton[i] == 0) {
        CHECK_FALSE(tau.has_value());
      } else {
        CHECK(tau == newton[i]);
      }
    }
  }
}

TEST_CASE("refinement_steps per policy") {
  BudgetSchedule s;
  CHECK(refinement_steps(s) == 0);
  s.refinement_policy = RefinementPolicy::ExtraGradients;
  CHECK(refinement_steps(s) == 3);
  s.refinement_policy = RefinementPolicy::ExtraNewton;
  CHECK(refinement_steps(s) == 1);
}

TEST_CASE("run: Infeasible when the budget rules the variant out") {
  const auto obj = make_scalar_problem({});
  SolverConfig cfg = scalar_config(Variant::RN, 10);
  cfg.budget = BudgetSchedule{};
  CHECK(code_of([&] { run(obj, cfg); }) == ErrorCode::Infeasible);
  cfg.h = 0.5;
  CHECK(run(obj, cfg).tau == 2);
}

TEST_CASE("run: GTT on a unit-drift quadratic has zero error") {
  const auto obj = make_quadratic_problem(1, linear_drift(Vector{0.0}, Vector{1.0}), 100.0);
  SolverConfig cfg = scalar_config(Variant::GTT, 200);
  cfg.gamma = 0.5;
  const TrajectoryLog log = run(obj, cfg);
  REQUIRE(log.records.size() == 201);
  for (const auto& r : log.records) {
    CHECK(r.err <= 1e-12);
    CHECK(r.t == doctest::Approx(r.k * 0.1));
  }
}

TEST_CASE("run: record layout") {
  const auto obj = make_scalar_problem({});
  const TrajectoryLog log = run(obj, scalar_config(Variant::GTT, 50));
  REQUIRE(log.records.size() == 51);
  for (std::size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    CHECK(r.k == static_cast<long long>(i));
    CHECK(r.t == static_cast<double>(i) * 0.1);
    CHECK(r.err == doctest::Approx(std::abs(r.x[0] - tvtest::scalar_optimum({}, r.t))).epsilon(1e-6));
    CHECK(r.grad_norm == doctest::Approx(norm(obj.gradient(r.x, r.t))));
    if (i + 1 < log.records.size()) {
      CHECK(r.pred_err == doctest::Approx(distance(r.x_pred, log.records[i + 1].x_star)));
    } else {
      CHECK(std::isnan(r.pred_err));
      CHECK(r.x_pred.empty());
    }
    CHECK_FALSE(r.switched);
  }
}

TEST_CASE("run: error floors on the scalar problem are ordered NTT < GTT < RG") {
  const auto obj = make_scalar_problem({});
  const double rg = tail_max(run(obj, scalar_config(Variant::RG, 3000)), 1500);
  const double gtt = tail_max(run(obj, scalar_config(Variant::GTT, 3000)), 1500);
  const double agt = tail_max(run(obj, scalar_config(Variant::AGT, 3000)), 1500);
  const double ntt = tail_max(run(obj, scalar_config(Variant::NTT, 3000)), 1500);
  CHECK(ntt < gtt);
  CHECK(gtt < rg);
  CHECK(agt < 10 * gtt);
  CHECK(gtt >= 1e-6);
  CHECK(gtt <= 1e-4);
  CHECK(ntt <= 1e-8);
}

TEST_CASE("run: RG equals a hand-written gradient loop") {
  const auto obj = make_scalar_problem({});
  const TrajectoryLog log = run(obj, scalar_config(Variant::RG, 300));
  double x = 0.0;
  for (const auto& r : log.records) {
    CHECK(r.x[0] == x);
    const double t_next = r.t + 0.1;
    x = x - 0.2 * obj.gradient(Vector{x}, t_next)[0];
  }
}

TEST_CASE("run: deterministic") {
  const auto obj = make_tracking_problem({}, lissajous_reference_path(0.01));
  SolverConfig cfg;
  cfg.variant = Variant::AGT;
  cfg.h = 1.0;
  cfg.gamma = 0.01;
  cfg.steps = 300;
  cfg.x0 = Vector{100.0, 100.0};
  cfg.v_max = 4.0;
  const TrajectoryLog a = run(obj, cfg);
  const TrajectoryLog b = run(obj, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].x[0] == b.records[i].x[0]);
    CHECK(a.records[i].x[1] == b.records[i].x[1]);
    CHECK(a.records[i].err == b.records[i].err);
  }
}

TEST_CASE("run: saturation limits every displacement") {
  const auto obj = make_tracking_problem({}, lissajous_reference_path(0.01));
  for (SaturationMode mode : {SaturationMode::NetDisplacement, SaturationMode::SeparatePhases}) {
    SolverConfig cfg;
    cfg.variant = Variant::ANT;
    cfg.h = 1.0;
    cfg.steps = 200;
    cfg.x0 = Vector{-100.0, -100.0};
    cfg.v_max = 4.0;
    cfg.saturation = mode;
    const TrajectoryLog log = run(obj, cfg);
    for (std::size_t i = 0; i + 1 < log.records.size(); ++i) {
      CHECK(distance(log.records[i + 1].x, log.records[i].x) <= 4.0 * (1 + 1e-12));
    }
  }
}

TEST_CASE("run: errors") {
  const auto obj = make_scalar_problem({});
  SolverConfig cfg = scalar_config(Variant::GTT, 10);
  cfg.x0 = Vector{0.0, 0.0};
  CHECK(code_of([&] { run(obj, cfg); }) == ErrorCode::DimensionMismatch);
  auto no_mixed = obj;
  no_mixed.mixed_tx = nullptr;
  CHECK(code_of([&] { run(no_mixed, scalar_config(Variant::GTT, 10)); }) == ErrorCode::MissingDerivative);
  CHECK_NOTHROW(run(no_mixed, scalar_config(Variant::AGT, 10)));
  SolverConfig bad = scalar_config(Variant::GTT, 0);
  CHECK(code_of([&] { run(obj, bad); }) == ErrorCode::InvalidArgument);
  SolverConfig hybrid = scalar_config(Variant::Hybrid, 10);
  CHECK(code_of([&] { run(obj, hybrid); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { hybrid_run(obj, scalar_config(Variant::GTT, 10)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("run: a diverging run keeps its partial log") {
  const auto obj = make_scalar_problem({});
  SolverConfig cfg = scalar_config(Variant::RG, 5000);
  cfg.gamma = 1e150;
  set_warning_handler([](std::string_view) {});
  try {
    run(obj, cfg);
    FAIL("expected a RunError");
  } catch (const RunError& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
    CHECK_FALSE(e.partial_log().records.empty());
    CHECK(e.partial_log().records.size() < 5000);
  }
}

TEST_CASE("run: a stepsize beyond 2/L warns once per run") {
  const auto obj = make_scalar_problem({});
  WarningCapture capture;
  SolverConfig cfg = scalar_config(Variant::RG, 20);
  cfg.gamma = 0.3;
  run(obj, cfg);
  CHECK(capture.messages.size() == 1);
  cfg.gamma = 0.2;
  run(obj, cfg);
  CHECK(capture.messages.size() == 1);
  run(obj, scalar_config(Variant::NTT, 20));
  CHECK(capture.messages.size() == 1);
}

TEST_CASE("run: a caller-supplied oracle is used for the errors") {
  const auto obj = make_scalar_problem({});
  const TrajectoryLog log = run(obj, scalar_config(Variant::GTT, 20), [](double) { return Vector{1.0}; });
  for (const auto& r : log.records) CHECK(r.err == doctest::Approx(std::abs(r.x[0] - 1.0)));
}

TEST_CASE("hybrid_run: c must exceed c_min") {
  const auto obj = make_scalar_problem({});
  const double c_min = hybrid_constants(1, 0.2, 0.1, *obj.constants).c_min;
  SolverConfig cfg = scalar_config(Variant::Hybrid, 50);
  cfg.hybrid_c = 0.9 * c_min;
  CHECK(code_of([&] { hybrid_run(obj, cfg); }) == ErrorCode::InvalidHybridC);
  cfg.hybrid_c = c_min;
  CHECK(code_of([&] { hybrid_run(obj, cfg); }) == ErrorCode::InvalidHybridC);
  cfg.hybrid_c = 1.01 * c_min;
  CHECK_NOTHROW(hybrid_run(obj, cfg));
}

TEST_CASE("hybrid_run: follows GTT until the switch, then reaches the NTT floor") {
  const auto obj = make_scalar_problem({});
  const double c_min = hybrid_constants(1, 0.2, 0.1, *obj.constants).c_min;
  SolverConfig cfg = scalar_config(Variant::Hybrid, 2000);
  cfg.hybrid_c = 2.0 * c_min;
  const TrajectoryLog hyb = hybrid_run(obj, cfg);
  const TrajectoryLog gtt = run(obj, scalar_config(Variant::GTT, 2000));
  const TrajectoryLog ntt = run(obj, scalar_config(Variant::NTT, 2000));
  REQUIRE(hyb.switch_k);
  const long long s = *hyb.switch_k;
  const double threshold = 2.0 * c_min * 0.01;
  CHECK(hyb.records[s].grad_norm <= threshold);
  for (long long k = 0; k < s; ++k) {
    CHECK(hyb.records[k].x[0] == gtt.records[k].x[0]);
    CHECK_FALSE(hyb.records[k].switched);
    CHECK(hyb.records[k].grad_norm > threshold);
  }
  CHECK(hyb.records[s].x[0] == gtt.records[s].x[0]);
  for (std::size_t k = s; k < hyb.records.size(); ++k) CHECK(hyb.records[k].switched);
  const double ntt_floor = tail_max(ntt, 1000);
  for (long long k = s + 2; k < static_cast<long long>(hyb.records.size()); ++k) {
    CHECK(hyb.records[k].err <= 10 * ntt_floor);
    CHECK(hyb.records[k].err <= gtt.records[k].err + 1e-12);
  }
}

TEST_CASE("property: logged envelopes bound GTT and AGT on the scalar problem") {
  const auto obj = make_scalar_problem({});
  for (Variant v : {Variant::GTT, Variant::AGT}) {
    for (double h : {0.05, 0.1, 0.25, 0.5}) {
      for (int tau : {1, 2, 5}) {
        SolverConfig cfg = scalar_config(v);
        cfg.h = h;
        cfg.tau = tau;
        cfg.steps = static_cast<long long>(std::lround(150.0 / h));
        cfg.x0 = Vector{1.5};
        const TrajectoryLog log = run(obj, cfg);
        for (const auto& r : log.records) {
          REQUIRE_FALSE(std::isnan(r.bound_env));
          CHECK(r.err <= r.bound_env + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("run: no envelope for running methods or saturated runs") {
  const auto obj = make_scalar_problem({});
  for (const auto& r : run(obj, scalar_config(Variant::RG, 5)).records) CHECK(std::isnan(r.bound_env));
  SolverConfig cfg = scalar_config(Variant::GTT, 5);
  cfg.v_max = 1.0;
  for (const auto& r : run(obj, cfg).records) CHECK(std::isnan(r.bound_env));
}

TEST_CASE("run: budget refinement adds corrections for running methods") {
  const auto obj = make_scalar_problem({});
  SolverConfig plain = scalar_config(Variant::RG, 500);
  plain.h = 0.25;
  plain.budget = BudgetSchedule{};
  SolverConfig refined = plain;
  refined.budget->refinement_policy = RefinementPolicy::ExtraGradients;
  const TrajectoryLog a = run(obj, plain);
  const TrajectoryLog b = run(obj, refined);
  CHECK(a.tau == 3);
  CHECK(b.tau == 3);
  CHECK(tail_max(b, 250) < tail_max(a, 250));
}
