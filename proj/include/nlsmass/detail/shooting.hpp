#pragma once

#include <utility>
#include <vector>

#include "nlsmass/ground_state.hpp"

namespace nlsmass::detail {

// Sign of the shooting map at height a: +1 when the solution crosses zero
// before `r_target` ("too high"), -1 when it stays positive ("too low").
struct ShotSign {
  int sign = 0;
  double rho = 0.0;  // first zero, or r_target when none
};

// Bracketing and bisection on the initial height shared by the ball and
// whole-space solvers.
class HeightShooter {
 public:
  HeightShooter(const RadialProblem& problem, double lambda, double r_target,
                const ShootingSettings& settings, bool stop_at_minimum);

  ShotSign classify(double a);

  // Geometric expansion from `seed` with initial factor `factor`.
  std::pair<double, double> bracket(double seed, double factor);

  // Probes either side of the bracket; throws AmbiguityError when the sign
  // pattern has more than one change.
  void check_monotone(double lo, double hi);

  struct BisectionResult {
    double lo = 0.0;
    double hi = 0.0;
    double rho_hi = 0.0;
    bool converged = false;
  };
  BisectionResult bisect(double lo, double hi, double rho_tol);

  int integrations() const { return integrations_; }
  void count(int n) { integrations_ += n; }

 private:
  const RadialProblem& problem_;
  double lambda_;
  double r_target_;
  const ShootingSettings& settings_;
  IntegratorSettings fast_;
  int integrations_ = 0;
  std::vector<std::pair<double, int>> history_;
};

// Matched shooting: outward from the origin with height a up to r_match,
// inward from r_outer starting at amplitude * (phi0, phi1), continuity of
// (u, u') at r_match.
struct MatchedSolution {
  double a = 0.0;
  long double a_ext = 0.0L;  // unrounded height
  double amplitude = 0.0;
  RadialProfile profile;  // on [0, r_outer]
  int integrations = 0;
};

MatchedSolution matched_shoot(const RadialProblem& problem, double lambda,
                              double a_lo, double a_hi, double r_match,
                              double r_outer, double phi0, double phi1,
                              const ShootingSettings& settings, double max_step);

// First radius where the recorded profile drops to `level` (or -1).
double first_radius_below(const RadialProfile& p, double level);

}  // namespace nlsmass::detail
