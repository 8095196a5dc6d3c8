#pragma once

#include <optional>

#include "tvopt/objective.hpp"

namespace tvopt {

/// Which prediction the bound describes. Backward-difference prediction
/// doubles the C3 term of the truncation coefficient and replaces δ₂ by δ₂′.
enum class PredictionKind { Exact, BackwardDifference };

/// ρ = max{|1 − γm|, |1 − γL|}
double contraction_factor(double gamma, double m, double L);

/// σ = 1 + h (C0 C1 / m² + C2 / m)
double prediction_inflation(double h, const SmoothnessConstants& c);

/// Local truncation error of the Euler prediction,
/// (h²/2) [C0² C1 / m³ + 2 C0 C2 / m² + C3 / m].
double truncation_bound(double h, const SmoothnessConstants& c);

/// Per-sample prediction error coefficient Γ. Equal to truncation_bound for
/// exact prediction; the C3 term is doubled for backward differences.
double prediction_error_coefficient(double h, const SmoothnessConstants& c, PredictionKind kind);

/// Largest h for which the O(h²) gradient envelope applies:
/// [C0 C1 / m² + C2 / m]⁻¹ (ρ^{−τ} − 1). +∞ when the bracket vanishes.
/// Throws InadmissibleRegime if ρ ≥ 1.
double max_h_for_oh2(int tau, double gamma, const SmoothnessConstants& c);

struct GradientEnvelope {
  double rho = 0.0;
  double sigma = 0.0;
  /// O(h) envelope, valid whenever ρ < 1.
  double oh = 0.0;
  /// O(h²) envelope, present when ρ^τ σ < 1.
  std::optional<double> oh2;
  double asymptotic_oh = 0.0;
  std::optional<double> asymptotic_oh2;

  /// Tightest available bound at this k.
  double value() const { return oh2 && *oh2 < oh ? *oh2 : oh; }
};

/// Error envelope of gradient tracking after k samples starting from
/// initial_err = ‖x_0 − x*(t_0)‖. Throws InadmissibleRegime if ρ ≥ 1.
GradientEnvelope gradient_tracking_envelope(long long k, int tau, double h, double gamma,
                                            const SmoothnessConstants& c, double initial_err,
                                            PredictionKind kind);

/// Exact-prediction (GTT) and backward-difference (AGT) envelopes.
GradientEnvelope theorem1_envelope(long long k, int tau, double h, double gamma, const SmoothnessConstants& c,
                                   double initial_err);
GradientEnvelope theorem3_envelope(long long k, int tau, double h, double gamma, const SmoothnessConstants& c,
                                   double initial_err);

struct NewtonConstants {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta2_prime = 0.0;
  /// 2m / C1; absent when C1 = 0.
  std::optional<double> Q;
};

NewtonConstants newton_constants(const SmoothnessConstants& c);

struct NewtonCheck {
  bool admissible = false;
  /// min{1, [Q^{2τ−1} c / ((1 + δ₁) c + δ₂)^{2τ}]^{1/(4τ−2)}}
  double h_threshold = 0.0;
  /// Q^{−(2τ−1)} (σ c + δ₂)^{2τ} h^{4τ}, with σ at the given h.
  double floor = 0.0;
};

/// Local O(h^{4τ}) regime of Newton tracking for constant c > 0.
/// Throws QuadraticProblem when C1 = 0 (Newton is exact, Q is unbounded).
NewtonCheck newton_tracking_check(double c_const, int tau, double h, const SmoothnessConstants& c,
                                  PredictionKind kind);
NewtonCheck theorem2_check(double c_const, int tau, double h, const SmoothnessConstants& c);
NewtonCheck theorem4_check(double c_const, int tau, double h, const SmoothnessConstants& c);

struct HybridConstants {
  double c_min = 0.0;
  double m = 0.0;
  double h = 0.0;

  /// ‖∇ₓf(x_k; t_k)‖ ≤ m c h² triggers the switch to Newton.
  double switch_threshold(double c) const { return m * c * h * h; }
};

/// c_min = ρ^τ δ₂ / (1 − ρ^τ σ). Throws InadmissibleRegime if ρ^τ σ ≥ 1.
HybridConstants hybrid_constants(int tau, double gamma, double h, const SmoothnessConstants& c);

/// Every bound quantity for one (τ, γ, h) configuration.
struct BoundReport {
  double rho = 0.0;
  double sigma = 0.0;
  double gamma_trunc = 0.0;
  double gamma2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta2_prime = 0.0;
  std::optional<double> Q;
  double h_max_oh2 = 0.0;
  std::optional<double> h_max_newton;
  double asymptotic_oh = 0.0;
  std::optional<double> asymptotic_oh2;
  std::optional<double> newton_floor;
  std::optional<double> c_min;
};

/// Builds a BoundReport. Newton quantities need a constant c (they are left
/// empty without one or when C1 = 0); c_min is empty outside the O(h²) regime.
BoundReport bound_report(int tau, double gamma, double h, const SmoothnessConstants& c,
                         std::optional<double> newton_c = std::nullopt, PredictionKind kind = PredictionKind::Exact);

}  // namespace tvopt
