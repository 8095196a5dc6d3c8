#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tvopt/bounds.hpp"
#include "tvopt/errors.hpp"
#include "tvopt/oracle.hpp"
#include "tvopt/problems.hpp"
#include "tvopt/stepper.hpp"

using namespace tvopt;

TEST_CASE("optimal_point: unit drift quadratic") {
  const auto obj = make_quadratic_problem(1, linear_drift(Vector{0.0}, Vector{1.0}), 10.0);
  CHECK(optimal_point(obj, 3.7, Vector{0.0})[0] == doctest::Approx(3.7).epsilon(1e-14));
}

TEST_CASE("optimal_point: scalar problem at t = 0 agrees with bisection") {
  const auto obj = make_scalar_problem({});
  const double x = optimal_point(obj, 0.0, Vector{0.0})[0];
  CHECK(x == doctest::Approx(-0.9855).epsilon(1e-3));
  CHECK(std::abs(x - tvtest::scalar_optimum({}, 0.0)) < 1e-12);
  for (double t : {1.0, 12.5, 25.0, 40.0}) {
    CHECK(std::abs(optimal_point(obj, t, Vector{5.0})[0] - tvtest::scalar_optimum({}, t)) < 1e-12);
  }
}

TEST_CASE("optimal_point: tracking problem with a stationary target at the base station") {
  TrackingProblemParams p;
  ReferencePath still;
  still.position = [b = p.base](double) { return b; };
  const auto obj = make_tracking_problem(p, still);
  const Vector x = optimal_point(obj, 0.0, Vector{60.0, 130.0});
  CHECK(distance(x, p.base) < 1e-12);
}

TEST_CASE("optimal_point: idempotent") {
  const auto obj = make_tracking_problem({}, lissajous_reference_path(0.01));
  for (double t : {0.0, 100.0, 314.0}) {
    const Vector x = optimal_point(obj, t, Vector{100.0, 100.0});
    CHECK(distance(optimal_point(obj, t, x), x) <= 1e-13 * std::max(1.0, norm(x)));
  }
}

TEST_CASE("optimal_point: NoConvergence when iterations run out") {
  const auto obj = make_scalar_problem({});
  OracleOptions opts;
  opts.max_iterations = 1;
  try {
    optimal_point(obj, 0.0, Vector{30.0}, opts);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("optimal_trajectory: drift sequence and K = 0") {
  const auto obj = make_quadratic_problem(1, linear_drift(Vector{0.0}, Vector{1.0}), 10.0);
  const auto traj = optimal_trajectory(obj, 0.5, 0.25, 4, Vector{0.0});
  REQUIRE(traj.size() == 5);
  for (std::size_t k = 0; k < traj.size(); ++k) CHECK(traj[k][0] == doctest::Approx(0.5 + 0.25 * k));
  CHECK(optimal_trajectory(obj, 0.5, 0.25, 0, Vector{0.0}).size() == 1);
}

TEST_CASE("property: the optimal trajectory is Lipschitz with constant C0/m") {
  SUBCASE("scalar problem") {
    const auto obj = make_scalar_problem({});
    const auto& c = *obj.constants;
    for (double h : {0.1, 1.0}) {
      const auto traj = optimal_trajectory(obj, 0.0, h, 500, Vector{0.0});
      for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        CHECK(distance(traj[k + 1], traj[k]) <= c.C0 * h / c.m + 1e-9);
      }
    }
  }
  SUBCASE("tracking problem") {
    // The published C0 = 3.16 rounds √10 down, so the bound uses the exact
    // sup‖ẏ‖ = √10 and the observed curvature floor (≥ m).
    const auto obj = make_tracking_problem({}, lissajous_reference_path(0.01));
    const double c0 = std::sqrt(10.0);
    const double m = obj.constants->m;
    const double h = 1.0;
    const auto traj = optimal_trajectory(obj, 0.0, h, 700, Vector{100.0, 100.0});
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
      CHECK(distance(traj[k + 1], traj[k]) <= c0 * h / m + 1e-9);
    }
  }
}

TEST_CASE("continuous_flow: affine drift is an exact translation") {
  const auto obj = make_quadratic_problem(2, linear_drift(Vector{1.0, 2.0}, Vector{-0.5, 3.0}), 10.0);
  const Vector x{0.3, 0.4};
  const Vector flow = continuous_flow(obj, x, 1.0, 0.5);
  CHECK(distance(flow, Vector{0.3 - 0.25, 0.4 + 1.5}) < 1e-12);
  CHECK(distance(flow, predict(obj, x, 1.0, 0.5, PredictionMode::ExactTimeDerivative)) < 1e-12);
}

TEST_CASE("continuous_flow: doubling substeps changes the result by < 1e-10") {
  const auto obj = make_scalar_problem({});
  for (double h : {0.1, 0.5, 1.0}) {
    const Vector a = continuous_flow(obj, Vector{-0.9}, 3.0, h, 100);
    const Vector b = continuous_flow(obj, Vector{-0.9}, 3.0, h, 200);
    CHECK(distance(a, b) < 1e-10);
  }
  CHECK_THROWS_AS(continuous_flow(obj, Vector{0.0}, 0.0, 0.1, 99), Error);
}

TEST_CASE("property: measured truncation error stays below the bound") {
  const ScalarProblemParams p;
  const auto obj = make_scalar_problem(p);
  const auto& c = *obj.constants;
  for (double h : {0.5, 0.1, 0.02}) {
    const double bound = truncation_bound(h, c);
    Vector x{tvtest::scalar_optimum(p, 0.0)};
    double worst = 0.0;
    const int samples = static_cast<int>(std::lround(100.0 / h));
    for (int k = 0; k < samples; ++k) {
      const double t = k * h;
      const Vector pred = predict(obj, x, t, h, PredictionMode::ExactTimeDerivative);
      const Vector flow = continuous_flow(obj, x, t, h);
      worst = std::max(worst, distance(pred, flow));
      x = flow;
    }
    CHECK(worst <= bound);
    CHECK(worst > 0.0);
  }
}
