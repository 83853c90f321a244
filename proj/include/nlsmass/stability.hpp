#pragma once

#include <string>
#include <vector>

#include "nlsmass/ground_state.hpp"
#include "nlsmass/mass_curve.hpp"

namespace nlsmass {

enum class Stability { Stable, Unstable, Inconclusive };

std::string_view to_string(Stability s);

// Slope of the unsquared mass m(lambda) = ||u_lambda||_{L^2}.
struct SlopeEstimate {
  double slope = 0.0;  // Richardson value
  double error = 0.0;  // |D(h/2) - D(h)| / 3 plus a solver-noise floor
  double step = 0.0;   // h
  double mass = 0.0;   // m(lambda), unsquared
};

struct SpectrumSettings {
  int points = 4000;
  // Eigenvalues closer to zero than this raise the nondegeneracy warning.
  double gap_tolerance = 1e-3;
};

struct StabilityVerdict {
  double lambda = 0.0;
  double mass = 0.0;  // unsquared
  double slope = 0.0;
  double slope_err = 0.0;
  Stability verdict = Stability::Inconclusive;
  double nondeg_gap = 0.0;
  int negative_eigenvalues = 0;
  bool gap_warning = false;
};

// Centered difference of m with h = max(1e-3 (1 + |lambda|), local curve
// spacing), kept inside (-lambda_1, +inf); fresh solves at lambda +- h and
// lambda +- h/2. lambda must lie in the traced range.
SlopeEstimate mass_slope(const MassCurve& curve, double lambda,
                         const ShootingSettings& settings = {});

// Verdict from a slope: stable above 3 x error, unstable below -3 x error.
Stability classify_slope(const SlopeEstimate& s);

// The k smallest eigenvalues of the radial linearization
// -u'' - (N-1)/r u' + lambda u - f_u(r, u_lambda) u, Dirichlet at R, on a
// uniform finite-volume grid.
std::vector<double> linearized_spectrum(const RadialProblem& problem,
                                        const GroundState& gs, int k,
                                        const SpectrumSettings& settings = {});

// Eigenvalues of -u'' - (N-1)/r u' + V(r) u on [0, R] with Dirichlet at R.
std::vector<double> radial_operator_spectrum(
    int dimension, double radius, const std::function<double(double)>& potential,
    int k, int points);

StabilityVerdict classify_at_lambda(const MassCurve& curve, double lambda,
                                    const ShootingSettings& settings = {},
                                    const SpectrumSettings& spectrum = {});

struct MassStability {
  LookupResult lookup;
  std::vector<StabilityVerdict> verdicts;  // sorted by lambda
  std::vector<std::string> notes;
};

// mass_lookup followed by a slope verdict at each root.
MassStability classify_at_mass(const MassCurve& curve, double c,
                               const ShootingSettings& settings = {},
                               const SpectrumSettings& spectrum = {});

}  // namespace nlsmass
