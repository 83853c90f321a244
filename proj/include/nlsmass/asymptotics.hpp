#pragma once

#include <string>
#include <vector>

#include "nlsmass/ground_state.hpp"
#include "nlsmass/mass_curve.hpp"
#include "nlsmass/report.hpp"

namespace nlsmass {

// v(rho) = lambda^{-1/(p-2)} u(rho / sqrt(lambda)) on [0, sqrt(lambda) R].
struct RescaledState {
  double lambda = 0.0;
  double mu = 0.0;  // 1 / lambda
  int dimension = 0;
  double exponent = 0.0;
  double radius = 0.0;  // sqrt(lambda) R
  double weight_origin = 1.0;
  RadialProfile profile;
  double mass = 0.0;  // ||v||^2 on the stretched ball
  double source_mass = 0.0;
};

// Requires gs.lambda > 1.
RescaledState rescale(const GroundState& gs, const RadialProblem& problem);

// lambda^{2/(p-2) - N/2}; maps ||v||^2 back to ||u||^2.
double mass_scaling_factor(double lambda, int dimension, double exponent);

// Relative weak residual of
//   -Delta v + v = mu^{(p-1)/(p-2)} f(mu^{1/2} rho, mu^{-1/(p-2)} v)
// against v itself and a few cosine test functions vanishing at the edge.
double rescaled_residual(const RescaledState& rs, const RadialProblem& problem);

// Phi_mu(v) = 1/2 int |v'|^2 + v^2 - mu^{p/(p-2)} int F(mu^{1/2} rho, mu^{-1/(p-2)} v).
double rescaled_energy(const RescaledState& rs, const RadialProblem& problem);

// Q scaled by d(0)^{-1/(p-2)}, continued with its tail to r_outer.
RadialProfile renormalized_Q(const QProfile& q, double weight_origin, double r_outer);

// Zero-extended H^1 distance between v and the renormalized Q.
double compare_to_Q(const RescaledState& rs, const QProfile& q);

struct LimitsReport {
  Regime regime = Regime::Subcritical;
  double slope_fit = 0.0;
  double slope_stderr = 0.0;
  double slope_predicted = 0.0;
  double intercept_fit = 0.0;
  double prefactor_ratio = 0.0;  // m(lambda_max) lambda_max^{-slope} / ||Q^||^2
  double q_mass = 0.0;            // ||Q^||^2 after d(0) renormalisation
  double tail_mass = 0.0;         // part of ||Q^||^2 carried by the analytic tail
  double lambda_fit_min = 0.0;
  double lambda_fit_max = 0.0;
  int fit_samples = 0;
  double slope_tolerance = 0.05;
  double critical_tolerance = 0.03;
  ConditionReport report;
};

// Regime-dispatched checks on the last decade of the traced curve.
LimitsReport verify_limits(const RadialProblem& problem, const MassCurve& curve,
                           const QProfile& q, double slope_tolerance = 0.05,
                           double critical_tolerance = 0.03);

}  // namespace nlsmass
