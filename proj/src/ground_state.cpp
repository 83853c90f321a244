#include "nlsmass/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "nlsmass/detail/shooting.hpp"
#include "nlsmass/error.hpp"

namespace nlsmass {

std::string_view to_string(ShootingMethod m) {
  return m == ShootingMethod::Bisection ? "bisection" : "matched";
}

double GroundState::relative_residual() const {
  const double denom = gradient_norm_sq + std::abs(lambda) * mass;
  return denom > 0.0 ? std::abs(nehari_residual) / denom : std::abs(nehari_residual);
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Linear problem f == 0 in a dimension-compatible exponent.
RadialProblem linear_problem(int dimension, double radius) {
  const double crit = sobolev_exponent(dimension);
  const double p = 0.5 * (2.0 + std::min(crit, 6.0));
  return RadialProblem(dimension, p, radius, Weight::constant(0.0),
                       Perturbation::none(), "linear");
}

}  // namespace

double first_dirichlet_eigenvalue(int dimension, double radius, double tol) {
  if (dimension < 2) {
    throw Error(ErrorKind::Validation, "dimension must satisfy N >= 2");
  }
  if (!(radius > 0.0)) {
    throw Error(ErrorKind::Validation, "radius must be positive");
  }
  const RadialProblem linear = linear_problem(dimension, radius);
  IntegratorSettings s;
  s.rtol = 1e-13;
  s.atol = 1e-15;
  s.record = false;
  // crosses(L): the regular solution of u'' + (N-1)/r u' + L u = 0 has a
  // zero in (0, R].
  auto crosses = [&](double L) {
    const auto prof = integrate(linear, -L, 1.0, radius, s);
    return prof.event.kind == EventKind::ZeroCrossing;
  };
  double lo = 0.0;
  double hi = 1.0 / (radius * radius);
  int guard = 0;
  while (!crosses(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw Error(ErrorKind::Numeric, "eigenvalue bracket not found");
  }
  for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (crosses(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------- diagnostics

double mass(const RadialProfile& profile) {
  return radial_integral(profile, [](double, double u, double) { return u * u; });
}

double mass(const RadialProfile& profile, int dimension) {
  if (profile.dimension != dimension) {
    RadialProfile copy = profile;
    copy.dimension = dimension;
    return mass(copy);
  }
  return mass(profile);
}

double gradient_norm_sq(const RadialProfile& profile) {
  return radial_integral(profile, [](double, double, double du) { return du * du; });
}

double energy(const RadialProfile& profile, double lambda, const RadialProblem& problem) {
  const double grad = gradient_norm_sq(profile);
  const double m = mass(profile);
  const double pot =
      radial_integral(profile, [&](double r, double u, double) { return problem.F(r, u); });
  return 0.5 * (grad + lambda * m) - pot;
}

double nehari_residual(const RadialProfile& profile, double lambda,
                       const RadialProblem& problem) {
  const double grad = gradient_norm_sq(profile);
  const double m = mass(profile);
  const double work = radial_integral(
      profile, [&](double r, double u, double) { return problem.f(r, u) * u; });
  return grad + lambda * m - work;
}

// ------------------------------------------------------------ shooting

namespace detail {

HeightShooter::HeightShooter(const RadialProblem& problem, double lambda,
                             double r_target, const ShootingSettings& settings,
                             bool stop_at_minimum)
    : problem_(problem), lambda_(lambda), r_target_(r_target), settings_(settings) {
  fast_ = settings.ode;
  fast_.record = false;
  fast_.stop_at_minimum = stop_at_minimum;
}

ShotSign HeightShooter::classify(double a) {
  ++integrations_;
  const auto prof = integrate(problem_, lambda_, a, r_target_, fast_);
  ShotSign s;
  if (prof.event.kind == EventKind::ZeroCrossing) {
    s = {+1, prof.event.radius};
  } else {
    s = {-1, r_target_};
  }
  history_.emplace_back(a, s.sign);
  return s;
}

std::pair<double, double> HeightShooter::bracket(double seed, double factor) {
  double a = seed;
  const int s0 = classify(a).sign;
  double f = factor;
  for (int it = 0; it < settings_.expansion_budget; ++it) {
    const double next = s0 > 0 ? a / f : a * f;
    if (!(next > 1e-300) || !(next < 1e300)) break;
    const int s = classify(next).sign;
    if (s != s0) {
      return s0 > 0 ? std::make_pair(next, a) : std::make_pair(a, next);
    }
    a = next;
    if (f < 2.0) f = std::min(2.0, f * f);
  }
  throw Error(ErrorKind::Numeric,
              "shooting bracket not found within the expansion budget (last a = " +
                  num(a) + "); the shooting map shows no sign change");
}

void HeightShooter::check_monotone(double lo, double hi) {
  double a = lo;
  for (int k = 0; k < settings_.monotonicity_probes; ++k) {
    a *= 0.5;
    classify(a);
  }
  a = hi;
  for (int k = 0; k < settings_.monotonicity_probes; ++k) {
    a *= 2.0;
    classify(a);
  }
  auto h = history_;
  std::sort(h.begin(), h.end());
  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i].second != h[i - 1].second) brackets.emplace_back(h[i - 1].first, h[i].first);
  }
  if (brackets.size() > 1) {
    std::ostringstream os;
    os.precision(17);
    os << "shooting map is not monotone: " << brackets.size()
       << " candidate brackets for a*:";
    for (auto [x, y] : brackets) os << " [" << x << ", " << y << "]";
    throw AmbiguityError(os.str(), brackets);
  }
}

HeightShooter::BisectionResult HeightShooter::bisect(double lo, double hi,
                                                     double rho_tol) {
  BisectionResult res{lo, hi, 0.0, false};
  ShotSign top = classify(hi);
  res.rho_hi = top.rho;
  for (int it = 0; it < settings_.max_bisection; ++it) {
    if (std::abs(res.rho_hi - r_target_) < rho_tol * r_target_) {
      res.converged = true;
      return res;
    }
    const double mid = res.hi / res.lo > 1.5 ? std::sqrt(res.lo * res.hi)
                                             : 0.5 * (res.lo + res.hi);
    if (!(mid > res.lo && mid < res.hi)) break;
    const ShotSign s = classify(mid);
    if (s.sign > 0) {
      res.hi = mid;
      res.rho_hi = s.rho;
    } else {
      res.lo = mid;
    }
  }
  return res;
}

double first_radius_below(const RadialProfile& p, double level) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.u[i] <= level) return p.r[i];
  }
  return -1.0;
}

namespace {

using Real = long double;

struct InwardEnd {
  Real u = 0.0L;
  Real du = 0.0L;
};

}  // namespace

MatchedSolution matched_shoot(const RadialProblem& problem, double lambda,
                              double a_lo, double a_hi, double r_match,
                              double r_outer, double phi0, double phi1,
                              const ShootingSettings& settings, double max_step) {
  MatchedSolution out;
  IntegratorSettings fast = settings.ode;
  fast.record = false;
  fast.stop_at_minimum = false;
  fast.u_max = std::numeric_limits<double>::max();
  // Heights and amplitudes are carried in long double; without the extended
  // stepper they are rounded to double on entry, so tolerances follow that.
  const Real eps = settings.ode.extended ? std::numeric_limits<Real>::epsilon()
                                         : std::numeric_limits<double>::epsilon();
  const Real amp_tol = settings.ode.extended ? 1e-17L : 1e-13L;
  const double phi_max = std::max(std::abs(phi0), std::abs(phi1));

  auto inward = [&](Real amp) -> InwardEnd {
    ++out.integrations;
    const auto seg = integrate_segment(problem, lambda, r_outer, amp * phi0, amp * phi1,
                                       r_match, fast, static_cast<double>(amp) * phi_max);
    if (seg.event.kind != EventKind::ReachedEnd) {
      return {std::numeric_limits<Real>::infinity(), 0.0L};
    }
    return {seg.end_u, seg.end_du};
  };

  // Amplitude with inward value equal to `target` at r_match.
  Real amp_guess = 0.0L;
  auto solve_amplitude = [&](Real target) -> std::pair<Real, InwardEnd> {
    Real amp = amp_guess > 0.0L ? amp_guess : 1e-100L * target;
    InwardEnd e = inward(amp);
    if (amp_guess <= 0.0L) {
      // Near-linear response: rescale from a tiny probe amplitude.
      amp = amp * target / e.u;
      e = inward(amp);
    }
    Real prev_amp = amp, prev_u = e.u;
    amp = amp * target / e.u;
    // The inward value is reproducible to a few ulp only.
    for (int it = 0; it < 30; ++it) {
      e = inward(amp);
      if (!std::isfinite(e.u) || e.u <= 0.0L) {
        amp = 0.5L * (amp + prev_amp);
        continue;
      }
      if (std::abs(e.u - target) <= amp_tol * target) break;
      // Secant in log-log coordinates.
      const Real la = std::log(amp), lp = std::log(prev_amp);
      const Real lu = std::log(e.u), lpu = std::log(prev_u);
      // Nearly linear response: slope 1 unless the points are well separated.
      Real slope = std::abs(la - lp) > 1e-6L ? (lu - lpu) / (la - lp) : 1.0L;
      if (!std::isfinite(slope)) slope = 1.0L;
      slope = std::clamp(slope, 0.5L, 4.0L);
      prev_amp = amp;
      prev_u = e.u;
      const Real next = std::exp(la + (std::log(target) - lu) / slope);
      if (next == amp) break;
      amp = next;
    }
    amp_guess = amp;
    return {amp, e};
  };

  // Derivative mismatch; -inf sentinel when the outward solution crosses
  // zero before r_match (height too large).
  auto mismatch = [&](Real a) -> Real {
    ++out.integrations;
    const auto o = integrate(problem, lambda, a, r_match, fast);
    if (o.event.kind == EventKind::ZeroCrossing || o.end_u <= 0.0L) {
      return -std::numeric_limits<Real>::infinity();
    }
    const Real um = o.end_u, vm = o.end_du;
    const auto [amp, e] = solve_amplitude(um);
    (void)amp;
    return (vm - e.du) / std::abs(vm);
  };

  // Root of the mismatch from a bracket [a_lo, a_hi] (possibly degenerate),
  // widened relatively from `widen` until the sign changes.
  struct Done {};
  const Real tol = settings.match_tol;
  auto solve = [&](Real a_lo, Real a_hi, Real widen, bool strict) {
    Real lo = a_lo, hi = a_hi;
    Real glo = mismatch(lo), ghi = mismatch(hi);
    for (int it = 0; it < 60 && !(glo > 0.0L && ghi < 0.0L); ++it) {
      if (!(glo > 0.0L)) {
        lo = a_lo * (1.0L - widen);
        glo = mismatch(lo);
      }
      if (!(ghi < 0.0L)) {
        hi = a_hi * (1.0L + widen);
        ghi = mismatch(hi);
      }
      widen *= 4.0L;
    }
    if (!(glo > 0.0L && ghi < 0.0L)) {
      throw Error(ErrorKind::Numeric, "matched shooting: no sign change of the derivative "
                                      "mismatch near a = " + num(static_cast<double>(a_lo)));
    }
    // Replace the crossing sentinel by bisection until both ends are finite.
    while (!std::isfinite(ghi)) {
      const Real mid = 0.5L * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const Real gm = mismatch(mid);
      if (gm > 0.0L) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
        ghi = gm;
      }
    }
    Real a_star = 0.5L * (lo + hi);
    if (std::isfinite(ghi) && std::isfinite(glo)) {
      std::uintmax_t iters = 200;
      auto stop = [&](Real x, Real y) { return std::abs(x - y) <= 4 * eps * std::abs(x); };
      Real best = lo, best_g = glo;
      auto fn = [&](Real a) {
        const Real g = mismatch(a);
        if (std::abs(g) < std::abs(best_g)) {
          best = a;
          best_g = g;
        }
        if (std::abs(g) <= tol) throw Done{};
        return g;
      };
      Real x_lo = lo, x_hi = hi;
      try {
        const auto br =
            boost::math::tools::toms748_solve(fn, lo, hi, glo, ghi, stop, iters);
        x_lo = br.first;
        x_hi = br.second;
      } catch (const Done&) {
      } catch (const std::exception&) {
      }
      a_star = best;
      if (strict && std::abs(best_g) > tol) {
        // Accept when the bracket is resolved to the representable limit in a.
        const Real ulps = std::abs(x_hi - x_lo) / (eps * a_star);
        if (ulps > 64.0L) {
          throw Error(ErrorKind::Numeric, "matched shooting did not converge (mismatch " +
                                              num(static_cast<double>(best_g)) + ")");
        }
      }
    }
    return a_star;
  };

  // Cheap pass without the step cap, then a polish with the same stepping
  // as the recorded profile so the final join reproduces the solved mismatch.
  // The mismatch is close to linear in a at that scale: secant first.
  const Real a_fast = solve(a_lo, a_hi, 1e-14L, false);
  fast.max_step = max_step;
  Real a_star = a_fast;
  {
    Real a0 = a_fast, g0 = mismatch(a0);
    Real best_g = g0;
    if (std::abs(g0) > tol && std::isfinite(g0)) {
      Real a1 = a0 * (1.0L + (g0 > 0.0L ? 1e-11L : -1e-11L));
      Real g1 = mismatch(a1);
      for (int it = 0; it < 12 && std::isfinite(g1); ++it) {
        if (std::abs(g1) < std::abs(best_g)) {
          best_g = g1;
          a_star = a1;
        }
        if (std::abs(g1) <= tol || g1 == g0) break;
        const Real a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
        if (a2 == a1 || !(std::abs(a2 - a_fast) < 1e-6L * a_fast)) break;
        a0 = a1;
        g0 = g1;
        a1 = a2;
        g1 = mismatch(a1);
      }
    }
    if (!(std::abs(best_g) <= tol)) a_star = solve(a_star, a_star, 1e-13L, true);
  }

  // Recorded solution on both sides of the matching radius.
  IntegratorSettings rec = settings.ode;
  rec.record = true;
  rec.stop_at_minimum = false;
  rec.max_step = max_step;
  rec.u_max = std::numeric_limits<double>::max();
  ++out.integrations;
  RadialProfile outward = integrate(problem, lambda, a_star, r_match, rec);
  if (outward.event.kind != EventKind::ReachedEnd) {
    throw Error(ErrorKind::Numeric, "matched shooting: outward solution terminated early");
  }
  const auto [amp, e] = solve_amplitude(outward.end_u);
  (void)e;
  ++out.integrations;
  const auto seg = integrate_segment(problem, lambda, r_outer, amp * phi0, amp * phi1,
                                     r_match, rec, static_cast<double>(amp) * phi_max);
  RadialProfile prof = std::move(outward);
  const bool second = prof.has_second() && seg.has_second();
  if (!second) prof.ddu.clear();
  for (std::size_t i = seg.size(); i-- > 0;) {
    if (seg.r[i] <= prof.r.back()) continue;
    prof.r.push_back(seg.r[i]);
    prof.u.push_back(seg.u[i]);
    prof.du.push_back(seg.du[i]);
    if (second) prof.ddu.push_back(seg.ddu[i]);
  }
  out.a = static_cast<double>(a_star);
  out.a_ext = a_star;
  out.amplitude = static_cast<double>(amp);
  out.profile = std::move(prof);
  return out;
}

}  // namespace detail

GroundState shoot_ground_state(const RadialProblem& problem, double lambda,
                               const ShootingSettings& settings,
                               std::optional<WarmStart> warm) {
  const double lambda1 =
      first_dirichlet_eigenvalue(problem.dimension(), problem.radius());
  return shoot_ground_state(problem, lambda, lambda1, settings, warm);
}

GroundState shoot_ground_state(const RadialProblem& problem, double lambda,
                               double lambda1, const ShootingSettings& settings,
                               std::optional<WarmStart> warm) {
  const double margin = settings.margin_factor * (1.0 + std::abs(lambda1));
  if (!(lambda > -lambda1 + margin)) {
    throw Error(ErrorKind::BelowFirstEigenvalue,
                "no positive solution expected below -lambda_1: lambda = " + num(lambda) +
                    ", -lambda_1 = " + num(-lambda1));
  }
  const double R = problem.radius();
  const double p = problem.exponent();
  detail::HeightShooter shooter(problem, lambda, R, settings, false);

  double seed, factor;
  if (warm && warm->a > 0.0) {
    seed = warm->a;
    factor = 1.01;
  } else {
    const double d0 = std::max(problem.weight_at_origin(), 1e-300);
    seed = std::pow((std::abs(lambda) + lambda1) / d0, 1.0 / (p - 2.0));
    factor = 2.0;
  }
  auto [lo, hi] = shooter.bracket(seed, factor);
  shooter.check_monotone(lo, hi);
  auto bis = shooter.bisect(lo, hi, settings.rho_tol);

  GroundState gs;
  gs.lambda = lambda;
  bool done = false;
  if (bis.converged) {
    IntegratorSettings rec = settings.ode;
    rec.record = true;
    shooter.count(1);
    RadialProfile prof = integrate(problem, lambda, bis.hi, R, rec);
    if (prof.event.kind == EventKind::ZeroCrossing &&
        std::abs(prof.event.radius - R) < settings.rho_tol * R) {
      gs.profile = std::move(prof);
      gs.height = bis.hi;
      gs.method = ShootingMethod::Bisection;
      done = true;
    }
  }
  if (!done) {
    // accepted on rho alone from a wide bracket (warm seed): close the
    // bracket so the inward join starts near a*
    if (bis.converged) bis = shooter.bisect(bis.lo, bis.hi, 0.0);
    // Bisection stalls when the growing mode amplifies rounding in a by
    // more than 1/rho_tol; join an inward Dirichlet solution instead.
    IntegratorSettings rec = settings.ode;
    rec.record = true;
    shooter.count(1);
    const RadialProfile low = integrate(problem, lambda, bis.lo, R, rec);
    const double r_match = detail::first_radius_below(low, settings.match_fraction * bis.lo);
    if (!(r_match > 0.0) || !(r_match < R)) {
      throw Error(ErrorKind::Numeric,
                  "shooting stalled at a = " + num(bis.lo) + " with rho = " + num(bis.rho_hi) +
                      " and no matching radius is available");
    }
    const double stiff = 1.0 + std::abs(lambda) + std::abs(problem.f_u(0.0, bis.lo));
    const double max_step = std::min(R / 2048.0, 0.005 / std::sqrt(stiff));
    auto m = detail::matched_shoot(problem, lambda, bis.lo, bis.hi, r_match, R, 0.0, -1.0,
                                   settings, max_step);
    gs.profile = std::move(m.profile);
    gs.profile.u.back() = 0.0;
    gs.profile.event = {EventKind::ZeroCrossing, R};
    gs.height = m.a;
    gs.method = ShootingMethod::Matched;
  }

  const auto& prof = gs.profile;
  for (std::size_t i = 0; i + 1 < prof.size(); ++i) {
    if (!(prof.u[i] > 0.0)) {
      throw Error(ErrorKind::Numeric, "computed solution is not positive at r = " +
                                          num(prof.r[i]));
    }
  }
  gs.integrations = shooter.integrations();
  gs.mass = mass(prof);
  gs.gradient_norm_sq = gradient_norm_sq(prof);
  gs.energy = energy(prof, lambda, problem);
  gs.nehari_residual = nehari_residual(prof, lambda, problem);
  return gs;
}

}  // namespace nlsmass
