#include "tvopt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvopt/errors.hpp"

namespace tvopt {

namespace {

void require_positive_h(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "sampling period must be positive");
}

void require_tau(int tau) {
  if (tau < 1) throw Error(ErrorCode::InvalidArgument, "tau must be >= 1");
}

// C0 C1 / m² + C2 / m
double drift_coefficient(const SmoothnessConstants& c) { return c.C0 * c.C1 / (c.m * c.m) + c.C2 / c.m; }

}  // namespace

double contraction_factor(double gamma, double m, double L) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (!(m > 0.0) || !(m <= L)) throw Error(ErrorCode::InvalidArgument, "need 0 < m <= L");
  return std::max(std::abs(1.0 - gamma * m), std::abs(1.0 - gamma * L));
}

double prediction_inflation(double h, const SmoothnessConstants& c) { return 1.0 + h * drift_coefficient(c); }

double truncation_bound(double h, const SmoothnessConstants& c) {
  return prediction_error_coefficient(h, c, PredictionKind::Exact);
}

double prediction_error_coefficient(double h, const SmoothnessConstants& c, PredictionKind kind) {
  require_positive_h(h);
  const double m = c.m;
  const double c3 = kind == PredictionKind::Exact ? c.C3 : 2.0 * c.C3;
  const double bracket = c.C0 * c.C0 * c.C1 / (m * m * m) + 2.0 * c.C0 * c.C2 / (m * m) + c3 / m;
  return 0.5 * h * h * bracket;
}

double max_h_for_oh2(int tau, double gamma, const SmoothnessConstants& c) {
  require_tau(tau);
  const double rho = contraction_factor(gamma, c.m, c.L);
  if (!(rho < 1.0)) throw Error(ErrorCode::InadmissibleRegime, "gradient correction does not contract (rho >= 1)");
  const double coef = drift_coefficient(c);
  if (coef == 0.0) return std::numeric_limits<double>::infinity();
  return (std::pow(rho, -tau) - 1.0) / coef;
}

GradientEnvelope gradient_tracking_envelope(long long k, int tau, double h, double gamma,
                                            const SmoothnessConstants& c, double initial_err,
                                            PredictionKind kind) {
  require_tau(tau);
  require_positive_h(h);
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "sample index must be >= 0");
  GradientEnvelope e;
  e.rho = contraction_factor(gamma, c.m, c.L);
  if (!(e.rho < 1.0)) throw Error(ErrorCode::InadmissibleRegime, "gradient correction does not contract (rho >= 1)");
  e.sigma = prediction_inflation(h, c);

  const double rt = std::pow(e.rho, tau);
  const double gamma_pred = prediction_error_coefficient(h, c, kind);
  const double gamma2 = 2.0 * h * c.C0 / c.m;
  const double kk = static_cast<double>(k);

  const double rtk = std::pow(rt, kk);
  e.oh = rtk * initial_err + rt * (gamma2 + gamma_pred) * (1.0 - rtk) / (1.0 - rt);
  e.asymptotic_oh = 2.0 * c.C0 * rt * h / (c.m * (1.0 - rt));

  const double q = rt * e.sigma;
  if (q < 1.0) {
    const double qk = std::pow(q, kk);
    e.oh2 = qk * initial_err + rt * gamma_pred * (1.0 - qk) / (1.0 - q);
    e.asymptotic_oh2 = rt * gamma_pred / (1.0 - q);
  }
  return e;
}

GradientEnvelope theorem1_envelope(long long k, int tau, double h, double gamma, const SmoothnessConstants& c,
                                   double initial_err) {
  return gradient_tracking_envelope(k, tau, h, gamma, c, initial_err, PredictionKind::Exact);
}

GradientEnvelope theorem3_envelope(long long k, int tau, double h, double gamma, const SmoothnessConstants& c,
                                   double initial_err) {
  return gradient_tracking_envelope(k, tau, h, gamma, c, initial_err, PredictionKind::BackwardDifference);
}

NewtonConstants newton_constants(const SmoothnessConstants& c) {
  const double m = c.m;
  NewtonConstants n;
  n.delta1 = drift_coefficient(c);
  n.delta2 = c.C0 * c.C0 * c.C1 / (2.0 * m * m * m) + c.C0 * c.C2 / (m * m) + c.C3 / (2.0 * m);
  n.delta2_prime = n.delta2 + c.C3 / (2.0 * m);
  if (c.C1 > 0.0) n.Q = 2.0 * m / c.C1;
  return n;
}

NewtonCheck newton_tracking_check(double c_const, int tau, double h, const SmoothnessConstants& c,
                                  PredictionKind kind) {
  require_tau(tau);
  require_positive_h(h);
  if (!(c_const > 0.0)) throw Error(ErrorCode::InvalidArgument, "Newton constant c must be positive");
  const NewtonConstants nc = newton_constants(c);
  if (!nc.Q) throw Error(ErrorCode::QuadraticProblem, "C1 = 0: Newton correction is exact");
  const double Q = *nc.Q;
  const double d2 = kind == PredictionKind::Exact ? nc.delta2 : nc.delta2_prime;
  const double p = 2.0 * tau;

  NewtonCheck out;
  const double inner = std::pow(Q, p - 1.0) * c_const / std::pow((1.0 + nc.delta1) * c_const + d2, p);
  out.h_threshold = std::min(1.0, std::pow(inner, 1.0 / (2.0 * p - 2.0)));
  out.admissible = h <= out.h_threshold;
  const double sigma = prediction_inflation(h, c);
  out.floor = std::pow(Q, -(p - 1.0)) * std::pow(sigma * c_const + d2, p) * std::pow(h, 2.0 * p);
  return out;
}

NewtonCheck theorem2_check(double c_const, int tau, double h, const SmoothnessConstants& c) {
  return newton_tracking_check(c_const, tau, h, c, PredictionKind::Exact);
}

NewtonCheck theorem4_check(double c_const, int tau, double h, const SmoothnessConstants& c) {
  return newton_tracking_check(c_const, tau, h, c, PredictionKind::BackwardDifference);
}

HybridConstants hybrid_constants(int tau, double gamma, double h, const SmoothnessConstants& c) {
  require_tau(tau);
  require_positive_h(h);
  const double rt = std::pow(contraction_factor(gamma, c.m, c.L), tau);
  const double q = rt * prediction_inflation(h, c);
  if (!(q < 1.0)) throw Error(ErrorCode::InadmissibleRegime, "rho^tau * sigma >= 1: no O(h^2) regime at this h");
  HybridConstants out;
  out.c_min = rt * newton_constants(c).delta2 / (1.0 - q);
  out.m = c.m;
  out.h = h;
  return out;
}

BoundReport bound_report(int tau, double gamma, double h, const SmoothnessConstants& c,
                         std::optional<double> newton_c, PredictionKind kind) {
  c.validate();
  const GradientEnvelope env = gradient_tracking_envelope(0, tau, h, gamma, c, 0.0, kind);
  const NewtonConstants nc = newton_constants(c);

  BoundReport r;
  r.rho = env.rho;
  r.sigma = env.sigma;
  r.gamma_trunc = prediction_error_coefficient(h, c, kind);
  r.gamma2 = 2.0 * h * c.C0 / c.m;
  r.delta1 = nc.delta1;
  r.delta2 = nc.delta2;
  r.delta2_prime = nc.delta2_prime;
  r.Q = nc.Q;
  r.h_max_oh2 = max_h_for_oh2(tau, gamma, c);
  r.asymptotic_oh = env.asymptotic_oh;
  r.asymptotic_oh2 = env.asymptotic_oh2;
  if (env.oh2) r.c_min = hybrid_constants(tau, gamma, h, c).c_min;
  if (newton_c && nc.Q) {
    const NewtonCheck chk = newton_tracking_check(*newton_c, tau, h, c, kind);
    r.h_max_newton = chk.h_threshold;
    r.newton_floor = chk.floor;
  }
  return r;
}

}  // namespace tvopt
