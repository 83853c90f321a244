#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlsmass/detail/shooting.hpp"
#include "nlsmass/error.hpp"
#include "nlsmass/ground_state.hpp"

namespace nlsmass {

namespace {

// Decaying solution r^{-nu} K_nu(r) of the linearized equation at infinity.
double bessel_tail(int dimension, double r) {
  const double nu = 0.5 * (dimension - 2);
  return std::pow(r, -nu) * std::cyl_bessel_k(nu, r);
}

double bessel_tail_derivative(int dimension, double r) {
  const double nu = 0.5 * (dimension - 2);
  return -std::pow(r, -nu) * std::cyl_bessel_k(nu + 1.0, r);
}

// omega_{N-1} int_a^inf (r^{-nu} K_nu)^2 r^{N-1} dr
double bessel_tail_mass(int dimension, double a) {
  const double nu = 0.5 * (dimension - 2);
  const double k = std::cyl_bessel_k(nu, a);
  const double km = std::cyl_bessel_k(std::abs(nu - 1.0), a);
  const double kp = std::cyl_bessel_k(nu + 1.0, a);
  return unit_sphere_area(dimension) * 0.5 * a * a * (km * kp - k * k);
}

QProfile solve_once(int dimension, double exponent, const WholeSpaceSettings& settings) {
  const RadialProblem problem = RadialProblem::pure_power(dimension, exponent, 1.0);
  const double lambda = 1.0;
  const double r_probe = 80.0;
  ShootingSettings sh = settings.shooting;
  detail::HeightShooter shooter(problem, lambda, r_probe, sh, true);

  const double seed = std::pow(0.5 * exponent, 1.0 / (exponent - 2.0));
  auto [lo, hi] = shooter.bracket(seed, 2.0);
  const auto bis = shooter.bisect(lo, hi, 0.0);
  if (!(bis.hi / bis.lo - 1.0 < 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "bisection for Q(0) stagnated with bracket [" << bis.lo << ", " << bis.hi << "]";
    throw Error(ErrorKind::Numeric, os.str());
  }

  IntegratorSettings rec = sh.ode;
  rec.record = true;
  rec.stop_at_minimum = true;
  const RadialProfile low = integrate(problem, lambda, bis.lo, r_probe, rec);
  const double r_match = detail::first_radius_below(low, sh.match_fraction * bis.lo);
  if (!(r_match > 0.0)) {
    throw Error(ErrorKind::Numeric, "no matching radius for the whole-space solution");
  }
  const double c_est = low.value(r_match) / bessel_tail(dimension, r_match);
  const double target = settings.outer_fraction * bis.lo;
  double r_in = r_match, r_out = r_match;
  while (c_est * bessel_tail(dimension, r_out) > target) {
    r_in = r_out;
    r_out *= 1.5;
    if (r_out > 1e4) throw Error(ErrorKind::Numeric, "outer radius for Q not found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (r_in + r_out);
    (c_est * bessel_tail(dimension, mid) > target ? r_in : r_out) = mid;
  }
  const double r_outer = r_out;
  const double phi0 = bessel_tail(dimension, r_outer);
  const double phi1 = bessel_tail_derivative(dimension, r_outer);

  // fine enough that u' interpolates from (u', u'') alone to ~1e-14
  auto m = detail::matched_shoot(problem, lambda, bis.lo, bis.hi, r_match, r_outer,
                                 phi0 / phi0, phi1 / phi0, sh, 3e-4);
  RadialProfile full = std::move(m.profile);
  const double a = m.a;

  // Monotone, single-signed profile.
  for (std::size_t i = 1; i < full.size(); ++i) {
    if (!(full.u[i] > 0.0) || !(full.u[i] < full.u[i - 1])) {
      std::ostringstream os;
      os.precision(17);
      os << "whole-space solution is not positive and decreasing at r = " << full.r[i];
      throw Error(ErrorKind::Numeric, os.str());
    }
  }

  const double cut_level = settings.cut_fraction * a;
  std::size_t cut = full.size() - 1;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full.u[i] < cut_level) {
      cut = i;
      break;
    }
  }
  // Exponential tail fitted on the last decade above the cut.
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 0; i <= cut; ++i) {
    if (full.u[i] <= 10.0 * cut_level) {
      acc += std::log(full.u[i]) - std::log(bessel_tail(dimension, full.r[i]));
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorKind::Numeric, "no samples for the tail fit of Q");

  QProfile q;
  q.dimension = dimension;
  q.exponent = exponent;
  q.profile.dimension = dimension;
  q.profile.r.assign(full.r.begin(), full.r.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  q.profile.u.assign(full.u.begin(), full.u.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  q.profile.du.assign(full.du.begin(), full.du.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  if (full.has_second()) {
    q.profile.ddu.assign(full.ddu.begin(),
                         full.ddu.begin() + static_cast<std::ptrdiff_t>(cut) + 1);
  }
  q.profile.event = {EventKind::ReachedEnd, q.profile.r.back()};
  q.r_cut = q.profile.r.back();
  q.tail_coeff = std::exp(acc / count);
  q.tail_mass = q.tail_coeff * q.tail_coeff * bessel_tail_mass(dimension, q.r_cut);
  q.height = a;
  q.mass = mass(q.profile) + q.tail_mass;
  return q;
}

}  // namespace

double QProfile::tail(double r) const { return tail_coeff * bessel_tail(dimension, r); }

double QProfile::tail_derivative(double r) const {
  return tail_coeff * bessel_tail_derivative(dimension, r);
}

RadialProfile QProfile::extended(double r_outer, double spacing) const {
  RadialProfile p = profile;
  // uniform steps that land exactly on r_outer
  const long n = r_outer > r_cut ? std::lround(std::ceil((r_outer - r_cut) / spacing)) : 0;
  for (long k = 1; k <= n; ++k) {
    const double r = k == n ? r_outer : r_cut + (r_outer - r_cut) * double(k) / double(n);
    p.r.push_back(r);
    p.u.push_back(tail(r));
    p.du.push_back(tail_derivative(r));
    // linear tail: u'' = u - (N-1)/r u'
    if (!p.ddu.empty()) p.ddu.push_back(p.u.back() - (dimension - 1) / r * p.du.back());
  }
  p.event = {EventKind::ReachedEnd, p.r.back()};
  return p;
}

QProfile solve_whole_space_Q(int dimension, double exponent,
                             const WholeSpaceSettings& settings) {
  classify_regime(dimension, exponent);  // validates 2 < p < 2*
  QProfile q = solve_once(dimension, exponent, settings);
  q.mass_uncertainty = q.tail_mass;
  if (settings.estimate_uncertainty) {
    WholeSpaceSettings tight = settings;
    tight.estimate_uncertainty = false;
    tight.shooting.ode.rtol *= 1e-1;
    tight.shooting.ode.atol *= 1e-1;
    const QProfile t = solve_once(dimension, exponent, tight);
    q.mass_uncertainty += std::abs(t.mass - q.mass);
  }
  return q;
}

}  // namespace nlsmass
