#include "tvopt/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvopt/errors.hpp"

namespace tvopt {

void SmoothnessConstants::validate() const {
  if (!(m > 0.0) || !(m <= L)) {
    throw Error(ErrorCode::InvalidArgument, "smoothness constants need 0 < m <= L");
  }
  if (C0 < 0.0 || C1 < 0.0 || C2 < 0.0 || C3 < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "smoothness constants C0..C3 must be non-negative");
  }
}

Vector TimeVaryingObjective::time_gradient(const Vector& x, double t) const {
  if (!mixed_tx) {
    throw Error(ErrorCode::MissingDerivative, "objective has no analytic mixed derivative ∇ₜₓf");
  }
  return mixed_tx(x, t);
}

const SmoothnessConstants& TimeVaryingObjective::require_constants() const {
  if (!constants) throw Error(ErrorCode::MissingConstants, "objective has no smoothness constants");
  return *constants;
}

Vector fd_time_gradient(const TimeVaryingObjective& obj, const Vector& x, double t, double t_prev) {
  const double dt = t - t_prev;
  if (!(dt >= 1e-12)) {
    throw Error(ErrorCode::DegenerateInterval,
                "backward difference needs t - t_prev >= 1e-12, got " + std::to_string(dt));
  }
  Vector d = obj.gradient(x, t) - obj.gradient(x, t_prev);
  d *= 1.0 / dt;
  return d;
}

std::vector<double> halton_point(std::size_t index, std::size_t dims) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (dims > std::size(kPrimes)) {
    throw Error(ErrorCode::InvalidArgument, "halton_point supports at most 16 dimensions");
  }
  std::vector<double> p(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const unsigned base = kPrimes[d];
    double f = 1.0;
    double r = 0.0;
    std::size_t i = index + 1;  // skip the all-zero first point
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    p[d] = r;
  }
  return p;
}

namespace {

std::vector<Vector> probe_directions(std::size_t n) {
  std::vector<Vector> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n);
    e[i] = 1.0;
    dirs.push_back(std::move(e));
  }
  if (n == 1) return dirs;
  for (std::size_t i = 0; dirs.size() < 33 * n; ++i) {
    const auto h = halton_point(i, n);
    Vector u(n);
    for (std::size_t d = 0; d < n; ++d) u[d] = 2.0 * h[d] - 1.0;
    const double len = norm(u);
    if (len < 1e-3) continue;
    dirs.push_back((1.0 / len) * u);
  }
  return dirs;
}

double safe_spectral_norm(const SymMatrix& m) {
  if (!m.all_finite()) return std::numeric_limits<double>::infinity();
  return spectral_norm(m);
}

double safe_norm(const Vector& v) {
  if (!v.all_finite()) return std::numeric_limits<double>::infinity();
  return norm(v);
}

}  // namespace

bool AssumptionReport::holds(const SmoothnessConstants& c, double rel_tol) const {
  auto ok = [rel_tol](double margin, double claimed) {
    return margin >= -rel_tol * std::max(1.0, std::abs(claimed));
  };
  return ok(margin_m, c.m) && ok(margin_L, c.L) && ok(margin_C0, c.C0) && ok(margin_C1, c.C1) &&
         ok(margin_C2, c.C2) && ok(margin_C3, c.C3);
}

AssumptionReport check_assumptions(const TimeVaryingObjective& obj, const SampleRegion& region,
                                   std::size_t n_samples) {
  const SmoothnessConstants& c = obj.require_constants();
  const std::size_t n = obj.dimension;
  if (region.lower.size() != n || region.upper.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "sample region does not match objective dimension");
  }
  if (n_samples == 0 || region.t_max < region.t_min) {
    throw Error(ErrorCode::InvalidArgument, "sample region is empty");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (region.upper[i] < region.lower[i]) throw Error(ErrorCode::InvalidArgument, "inverted box");
  }

  const auto directions = probe_directions(n);
  constexpr double inf = std::numeric_limits<double>::infinity();

  AssumptionReport r;
  r.samples = n_samples;
  r.observed_min_eig = inf;
  r.observed_max_eig = -inf;

  for (std::size_t s = 0; s < n_samples; ++s) {
    const auto u = halton_point(s, n + 1);
    Vector x(n);
    double xscale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = region.lower[i] + u[i] * (region.upper[i] - region.lower[i]);
      xscale = std::max(xscale, std::abs(x[i]));
    }
    const double t = region.t_min + u[n] * (region.t_max - region.t_min);
    const double dx = 1e-5 * xscale;
    const double dt = 1e-4 * std::max(1.0, std::abs(t));

    const SymMatrix hess = obj.hessian(x, t);
    if (hess.all_finite()) {
      const EigenBounds e = eig_bounds(hess);
      r.observed_min_eig = std::min(r.observed_min_eig, e.min);
      r.observed_max_eig = std::max(r.observed_max_eig, e.max);
    } else {
      r.observed_max_eig = inf;
    }

    Vector gtx = obj.has_mixed_tx()
                     ? obj.mixed_tx(x, t)
                     : (1.0 / (2.0 * dt)) * (obj.gradient(x, t + dt) - obj.gradient(x, t - dt));
    r.observed_C0 = std::max(r.observed_C0, safe_norm(gtx));

    for (const Vector& dir : directions) {
      SymMatrix d = obj.hessian(x + dx * dir, t) - obj.hessian(x - dx * dir, t);
      d *= 1.0 / (2.0 * dx);
      r.observed_C1 = std::max(r.observed_C1, safe_spectral_norm(d));
    }

    SymMatrix ht = obj.hessian(x, t + dt) - obj.hessian(x, t - dt);
    ht *= 1.0 / (2.0 * dt);
    r.observed_C2 = std::max(r.observed_C2, safe_spectral_norm(ht));

    Vector gttx(n);
    if (obj.has_mixed_ttx()) {
      gttx = obj.mixed_ttx(x, t);
    } else if (obj.has_mixed_tx()) {
      gttx = (1.0 / (2.0 * dt)) * (obj.mixed_tx(x, t + dt) - obj.mixed_tx(x, t - dt));
    } else {
      const double dt2 = 1e-3 * std::max(1.0, std::abs(t));
      gttx = (1.0 / (dt2 * dt2)) *
             (obj.gradient(x, t + dt2) - 2.0 * obj.gradient(x, t) + obj.gradient(x, t - dt2));
    }
    r.observed_C3 = std::max(r.observed_C3, safe_norm(gttx));
  }

  r.margin_m = r.observed_min_eig - c.m;
  r.margin_L = c.L - r.observed_max_eig;
  r.margin_C0 = c.C0 - r.observed_C0;
  r.margin_C1 = c.C1 - r.observed_C1;
  r.margin_C2 = c.C2 - r.observed_C2;
  r.margin_C3 = c.C3 - r.observed_C3;
  return r;
}

}  // namespace tvopt
