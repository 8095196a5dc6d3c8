#pragma once

// Reference computations used as independent oracles by the unit tests.

#include <cmath>
#include <functional>
#include <random>

#include "tvopt/linalg.hpp"
#include "tvopt/problems.hpp"

namespace tvtest {

inline constexpr double kPi = 3.14159265358979323846;

// Root of a monotone increasing scalar function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// x*(t) of the scalar problem from its gradient x − cos ωt + κμ/(1 + e^{−μx}).
inline double scalar_optimum(const tvopt::ScalarProblemParams& p, double t) {
  return bisect(
      [&](double x) { return x - std::cos(p.omega * t) + p.kappa * p.mu / (1.0 + std::exp(-p.mu * x)); }, -50.0,
      50.0);
}

// Constants of the scalar problem with the default parameters, written out
// from the closed forms by hand.
inline tvopt::SmoothnessConstants scalar_a_constants() {
  const double w = 0.02 * kPi;
  const double kappa = 7.5;
  const double mu = 1.75;
  return {1.0, 1.0 + kappa * mu * mu / 4.0, w, kappa * mu * mu * mu / (6.0 * std::sqrt(3.0)), 0.0, w * w};
}

// Symmetric matrix Q diag(eigs) Qᵀ with Q from Gram–Schmidt on random columns.
inline tvopt::SymMatrix random_spd(std::mt19937_64& rng, const std::vector<double>& eigs) {
  const std::size_t n = eigs.size();
  std::normal_distribution<double> normal;
  std::vector<tvopt::Vector> q;
  while (q.size() < n) {
    tvopt::Vector v(n);
    for (auto& e : v) e = normal(rng);
    for (const auto& u : q) v -= tvopt::dot(v, u) * u;
    const double len = tvopt::norm(v);
    if (len < 1e-6) continue;
    q.push_back((1.0 / len) * v);
  }
  tvopt::SymMatrix a(n);
  for (std::size_t k = 0; k < n; ++k) tvopt::add_outer(a, q[k], eigs[k]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  return a;
}

}  // namespace tvtest
