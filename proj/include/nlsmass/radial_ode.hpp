#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlsmass/problem.hpp"

namespace nlsmass {

enum class EventKind { ReachedEnd, ZeroCrossing, Blowup, Minimum };

std::string_view to_string(EventKind kind);

struct TerminalEvent {
  EventKind kind = EventKind::ReachedEnd;
  double radius = 0.0;
};

// Radial function sampled as (r, u, u') on an increasing grid starting at 0.
// Between samples it is the cubic Hermite interpolant, or the quintic one
// when u'' is also stored.
struct RadialProfile {
  int dimension = 0;
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> ddu;  // empty, or u'' at every sample
  TerminalEvent event;
  // Last state at the integrator's working precision.
  long double end_u = 0.0L;
  long double end_du = 0.0L;

  std::size_t size() const { return r.size(); }
  double r_max() const { return r.empty() ? 0.0 : r.back(); }

  bool has_second() const { return !ddu.empty() && ddu.size() == r.size(); }
  // Hermite interpolant; zero outside [0, r_max].
  double value(double x) const;
  double derivative(double x) const;

  // Throws Validation when the structural invariants are violated.
  void check() const;
};

struct IntegratorSettings {
  double rtol = 1e-12;
  // Absolute tolerance in units of the initial amplitude scale.
  double atol = 1e-14;
  // Radius of the series start; 0 selects min(1e-4 r_end, local scale).
  double r_series = 0.0;
  // Blow-up threshold; 0 selects 1e8 max(a, 1).
  double u_max = 0.0;
  std::size_t max_steps = 4'000'000;
  // Largest recorded step; 0 selects an automatic cap tied to lambda.
  double max_step = 0.0;
  // Record every accepted step; when false only the end point is kept.
  bool record = true;
  // Stop when u' changes sign from negative to nonnegative while u > 0.
  bool stop_at_minimum = false;
  // Run the stepper in long double (slower; lowers the roundoff floor).
  bool extended = false;
};

// Integrate u'' + (N-1)/r u' = lambda u - f(r,u), u(0) = a, u'(0) = 0,
// up to r_end or the first terminal event.
RadialProfile integrate(const RadialProblem& problem, double lambda, long double a,
                        double r_end, const IntegratorSettings& settings = {});

// Integrate the same equation from (r0, u0, du0) towards r1, which may lie
// below r0. Requires r0, r1 > 0. `scale` sets the absolute tolerance unit.
RadialProfile integrate_segment(const RadialProblem& problem, double lambda,
                                double r0, long double u0, long double du0, double r1,
                                const IntegratorSettings& settings, double scale);

// Zero-extended H^1(R^N) distance between two radial profiles.
double h1_distance(const RadialProfile& a, const RadialProfile& b);

// omega_{N-1} int_0^{r_max} integrand(r, u, u') r^{N-1} dr over the Hermite
// interpolant, five-point Gauss-Legendre per cell.
template <typename Fn>
double radial_integral(const RadialProfile& p, Fn&& integrand);

double unit_sphere_area(int dimension);

// CSV with a commented header line: columns r,u,du.
void write_profile_csv(std::ostream& os, const RadialProfile& profile,
                       double lambda, double a);

}  // namespace nlsmass

#include "nlsmass/detail/radial_integral.hpp"
