#pragma once

#include <optional>

#include "nlsmass/problem.hpp"
#include "nlsmass/radial_ode.hpp"

namespace nlsmass {

enum class ShootingMethod { Bisection, Matched };

std::string_view to_string(ShootingMethod m);

struct ShootingSettings {
  IntegratorSettings ode;
  // Accept the first zero rho(a) when |rho - R| < rho_tol * R.
  double rho_tol = 1e-10;
  // Margin above -lambda_1 as a fraction of (1 + |lambda_1|).
  double margin_factor = 1e-6;
  int expansion_budget = 200;
  int max_bisection = 400;
  // Matched shooting joins the outward and inward solutions where the
  // outward solution has decayed to this fraction of a.
  double match_fraction = 1e-2;
  // Relative derivative mismatch accepted at the matching radius.
  double match_tol = 1e-10;
  // Extra sign probes on both sides of the bracket used to detect a
  // non-monotone shooting map.
  int monotonicity_probes = 2;
};

struct WarmStart {
  double a = 0.0;
  ShootingMethod method = ShootingMethod::Bisection;
};

// Positive Dirichlet solution of -Delta u + lambda u = f(r,u) on B_R.
struct GroundState {
  double lambda = 0.0;
  RadialProfile profile;
  double height = 0.0;  // a* = u(0)
  double mass = 0.0;    // int_{B_R} u^2
  double energy = 0.0;
  double nehari_residual = 0.0;
  double gradient_norm_sq = 0.0;
  ShootingMethod method = ShootingMethod::Bisection;
  int integrations = 0;

  WarmStart warm_start() const { return {height, method}; }
  // |residual| / (|grad u|^2 + lambda * mass)
  double relative_residual() const;
};

// Smallest Dirichlet eigenvalue of -Delta on B_R, by bisection on the first
// zero of the regular radial solution of the linear equation.
double first_dirichlet_eigenvalue(int dimension, double radius, double tol = 1e-13);

GroundState shoot_ground_state(const RadialProblem& problem, double lambda,
                               const ShootingSettings& settings = {},
                               std::optional<WarmStart> warm = std::nullopt);

// Same, with lambda_1 supplied by the caller (avoids recomputation).
GroundState shoot_ground_state(const RadialProblem& problem, double lambda,
                               double lambda1, const ShootingSettings& settings,
                               std::optional<WarmStart> warm);

// omega_{N-1} int u^2 r^{N-1} dr
double mass(const RadialProfile& profile);
double mass(const RadialProfile& profile, int dimension);
double gradient_norm_sq(const RadialProfile& profile);
double energy(const RadialProfile& profile, double lambda, const RadialProblem& problem);
double nehari_residual(const RadialProfile& profile, double lambda,
                       const RadialProblem& problem);

// Unique positive radial solution Q of -Delta v + v = |v|^{p-2} v on R^N.
struct QProfile {
  int dimension = 0;
  double exponent = 0.0;
  RadialProfile profile;  // on [0, r_cut]
  double r_cut = 0.0;
  // Tail u(r) = tail_coeff * r^{-nu} K_nu(r), nu = (N-2)/2, for r > r_cut.
  double tail_coeff = 0.0;
  double tail_mass = 0.0;
  double height = 0.0;
  double mass = 0.0;  // ||Q||^2_{L^2(R^N)} including the tail
  // |mass(settings) - mass(tightened settings)| + tail mass.
  double mass_uncertainty = 0.0;

  double tail(double r) const;
  double tail_derivative(double r) const;
  // Profile continued with tail samples up to `r_outer`.
  RadialProfile extended(double r_outer, double spacing = 0.01) const;
};

struct WholeSpaceSettings {
  ShootingSettings shooting;
  double cut_fraction = 1e-8;
  // Linear-tail matching radius for the inward solve: u(r) ~ this * Q(0).
  double outer_fraction = 1e-12;
  bool estimate_uncertainty = true;
};

QProfile solve_whole_space_Q(int dimension, double exponent,
                             const WholeSpaceSettings& settings = {});

}  // namespace nlsmass
