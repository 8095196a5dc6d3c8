#include "tvopt/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tvopt/errors.hpp"

namespace tvopt {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

void ScalarProblemParams::validate() const {
  if (!(kappa >= 0.0) || !(mu >= 0.0) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidArgument, "scalar problem needs kappa >= 0, mu >= 0, finite omega");
  }
}

SmoothnessConstants scalar_problem_constants(const ScalarProblemParams& p) {
  const double s3 = std::numbers::sqrt3;
  SmoothnessConstants c;
  c.m = 1.0;
  c.L = 1.0 + p.kappa * p.mu * p.mu / 4.0;
  c.C0 = std::abs(p.omega);
  // max |σ''| of the logistic, attained where e^{μx} = 2 − √3
  c.C1 = p.kappa * p.mu * p.mu * p.mu * (2.0 - s3) * (s3 - 1.0) / std::pow(3.0 - s3, 3);
  c.C2 = 0.0;
  c.C3 = p.omega * p.omega;
  return c;
}

TimeVaryingObjective make_scalar_problem(const ScalarProblemParams& params) {
  params.validate();
  const double w = params.omega;
  const double k = params.kappa;
  const double mu = params.mu;

  TimeVaryingObjective obj;
  obj.dimension = 1;
  obj.value = [=](const Vector& x, double t) {
    const double d = x[0] - std::cos(w * t);
    return 0.5 * d * d + k * softplus(mu * x[0]);
  };
  obj.gradient = [=](const Vector& x, double t) {
    return Vector{x[0] - std::cos(w * t) + k * mu * logistic(mu * x[0])};
  };
  obj.hessian = [=](const Vector& x, double) {
    const double s = logistic(mu * x[0]);
    SymMatrix h(1);
    h(0, 0) = 1.0 + k * mu * mu * s * (1.0 - s);
    return h;
  };
  obj.mixed_tx = [=](const Vector&, double t) { return Vector{w * std::sin(w * t)}; };
  obj.mixed_ttx = [=](const Vector&, double t) { return Vector{w * w * std::cos(w * t)}; };
  obj.constants = scalar_problem_constants(params);
  return obj;
}

ReferencePath lissajous_reference_path(double omega) {
  ReferencePath path;
  path.position = [omega](double t) {
    return Vector{100.0 * std::cos(omega * t), 100.0 * std::sin(3.0 * omega * t)};
  };
  path.velocity = [omega](double t) {
    return Vector{-100.0 * omega * std::sin(omega * t), 300.0 * omega * std::cos(3.0 * omega * t)};
  };
  path.acceleration = [omega](double t) {
    return Vector{-100.0 * omega * omega * std::cos(omega * t),
                  -900.0 * omega * omega * std::sin(3.0 * omega * t)};
  };
  return path;
}

void TrackingProblemParams::validate() const {
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tracking problem needs mu1, mu2 >= 0");
  }
  if (base.size() != domain_lower.size() || base.size() != domain_upper.size() || base.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "base and domain must share a dimension");
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] < domain_lower[i] || base[i] > domain_upper[i]) {
      throw Error(ErrorCode::InvalidArgument, "base station lies outside the domain");
    }
  }
  if (constants) constants->validate();
}

TimeVaryingObjective make_tracking_problem(const TrackingProblemParams& params, const ReferencePath& path) {
  params.validate();
  if (!path.position) throw Error(ErrorCode::InvalidArgument, "reference path has no position");
  const double mu1 = params.mu1;
  const double mu2 = params.mu2;
  const Vector b = params.base;
  const auto y = path.position;

  TimeVaryingObjective obj;
  obj.dimension = b.size();
  obj.value = [=](const Vector& x, double t) {
    const Vector e = x - y(t);
    const Vector d = x - b;
    return 0.5 * (dot(e, e) + mu1 * std::exp(mu2 * dot(d, d)));
  };
  obj.gradient = [=](const Vector& x, double t) {
    const Vector d = x - b;
    const double w = mu1 * mu2 * std::exp(mu2 * dot(d, d));
    return (x - y(t)) + w * d;
  };
  obj.hessian = [=](const Vector& x, double) {
    const Vector d = x - b;
    const double w = mu1 * mu2 * std::exp(mu2 * dot(d, d));
    SymMatrix h = SymMatrix::identity(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h(i, i) += w;
    add_outer(h, d, 2.0 * mu2 * w);
    return h;
  };
  if (path.velocity) {
    const auto v = path.velocity;
    obj.mixed_tx = [v](const Vector&, double t) { return -1.0 * v(t); };
  }
  if (path.acceleration) {
    const auto a = path.acceleration;
    obj.mixed_ttx = [a](const Vector&, double t) { return -1.0 * a(t); };
  }
  obj.constants = params.constants;
  return obj;
}

Curve linear_drift(Vector offset, Vector rate) {
  if (offset.size() != rate.size()) throw Error(ErrorCode::DimensionMismatch, "linear drift");
  Curve c;
  c.position = [offset, rate](double t) { return offset + t * rate; };
  c.velocity = [rate](double) { return rate; };
  const std::size_t n = rate.size();
  c.acceleration = [n](double) { return Vector(n); };
  return c;
}

Curve sine_drift(Vector amplitude, double frequency) {
  Curve c;
  c.position = [amplitude, frequency](double t) { return std::sin(frequency * t) * amplitude; };
  c.velocity = [amplitude, frequency](double t) {
    return (frequency * std::cos(frequency * t)) * amplitude;
  };
  c.acceleration = [amplitude, frequency](double t) {
    return (-frequency * frequency * std::sin(frequency * t)) * amplitude;
  };
  return c;
}

TimeVaryingObjective make_quadratic_problem(std::size_t n, const Curve& drift, double horizon) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "quadratic problem needs n >= 1");
  if (!drift.position || !drift.velocity || !drift.acceleration) {
    throw Error(ErrorCode::MissingDerivative, "quadratic drift needs position, velocity and acceleration");
  }
  if (!(horizon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be non-negative");
  if (drift.position(0.0).size() != n) throw Error(ErrorCode::DimensionMismatch, "drift dimension");

  const auto d = drift.position;
  const auto v = drift.velocity;
  const auto a = drift.acceleration;

  TimeVaryingObjective obj;
  obj.dimension = n;
  obj.value = [d](const Vector& x, double t) {
    const Vector e = x - d(t);
    return 0.5 * dot(e, e);
  };
  obj.gradient = [d](const Vector& x, double t) { return x - d(t); };
  obj.hessian = [n](const Vector&, double) { return SymMatrix::identity(n); };
  obj.mixed_tx = [v](const Vector&, double t) { return -1.0 * v(t); };
  obj.mixed_ttx = [a](const Vector&, double t) { return -1.0 * a(t); };

  SmoothnessConstants c;
  c.m = 1.0;
  c.L = 1.0;
  constexpr int kGrid = 20000;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = horizon * static_cast<double>(i) / kGrid;
    c.C0 = std::max(c.C0, norm(v(t)));
    c.C3 = std::max(c.C3, norm(a(t)));
  }
  obj.constants = c;
  return obj;
}

}  // namespace tvopt
