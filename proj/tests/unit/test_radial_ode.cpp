#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsmass/error.hpp"
#include "nlsmass/radial_ode.hpp"
#include "oracles.hpp"

using namespace nlsmass;

namespace {

// f == 0: the equation is linear and has closed-form radial solutions.
RadialProblem linear(int n) {
  return RadialProblem(n, 3.0, 1.0, Weight::constant(0.0));
}

RadialProfile sampled_exp(double h, double r_end) {
  RadialProfile p;
  p.dimension = 3;
  const int n = static_cast<int>(std::lround(r_end / h));
  for (int i = 0; i <= n; ++i) {
    const double r = r_end * i / n;
    p.r.push_back(r);
    p.u.push_back(std::exp(-r));
    p.du.push_back(-std::exp(-r));
    p.ddu.push_back(std::exp(-r));
  }
  return p;
}

}  // namespace

TEST_CASE("linear N=3 solution sin(kr)/(kr) and its first zero") {
  const double k = 4.0;
  IntegratorSettings s;
  s.rtol = 1e-12;
  const auto prof = integrate(linear(3), -k * k, 2.0, 5.0, s);
  REQUIRE(prof.event.kind == EventKind::ZeroCrossing);
  CHECK(prof.event.radius == doctest::Approx(std::numbers::pi / k).epsilon(1e-10));
  for (double r : {0.1, 0.3, 0.6}) {
    CHECK(prof.value(r) == doctest::Approx(2.0 * std::sin(k * r) / (k * r)).epsilon(1e-9));
  }
  prof.check();
}

TEST_CASE("linear N=2 first zero is the J0 zero") {
  const double j0 = oracle::first_j0_zero();
  const auto prof = integrate(linear(2), -1.0, 1.0, 5.0);
  REQUIRE(prof.event.kind == EventKind::ZeroCrossing);
  CHECK(prof.event.radius == doctest::Approx(j0).epsilon(1e-9));
  CHECK(prof.value(1.0) == doctest::Approx(oracle::bessel_j0(1.0)).epsilon(1e-9));
}

TEST_CASE("linear growth sinh(kr)/(kr) reaches the end and blows up later") {
  const double k = 3.0;
  const auto prof = integrate(linear(3), k * k, 1.0, 2.0);
  CHECK(prof.event.kind == EventKind::ReachedEnd);
  CHECK(prof.value(2.0) == doctest::Approx(std::sinh(2 * k) / (2 * k)).epsilon(1e-9));
  IntegratorSettings s;
  s.u_max = 1e3;
  const auto blow = integrate(linear(3), k * k, 1.0, 10.0, s);
  CHECK(blow.event.kind == EventKind::Blowup);
  CHECK(blow.u.back() > 1e3);
}

TEST_CASE("minimum event below the whole-space height") {
  IntegratorSettings s;
  s.stop_at_minimum = true;
  const auto prof = integrate(RadialProblem::pure_power(3, 4.0), 1.0, 2.0, 50.0, s);  // u = 1 is an equilibrium
  CHECK(prof.event.kind == EventKind::Minimum);
  CHECK(prof.u.back() > 0.0);
}

TEST_CASE("segment integration backwards reproduces the forward solution") {
  const auto prob = RadialProblem::pure_power(3, 3.0);
  const auto fwd = integrate(prob, 1.0, 1.0, 0.8);
  REQUIRE(fwd.event.kind == EventKind::ReachedEnd);
  IntegratorSettings s;
  const auto back = integrate_segment(prob, 1.0, 0.8, fwd.u.back(), fwd.du.back(), 0.2, s, 1.0);
  CHECK(back.u.back() == doctest::Approx(fwd.value(0.2)).epsilon(1e-9));
}

TEST_CASE("extended stepper agrees with the double stepper") {
  const auto prob = RadialProblem::pure_power(3, 4.0);
  IntegratorSettings d, x;
  x.extended = true;
  const auto a = integrate(prob, 5.0, 3.0, 1.0, d);
  const auto b = integrate(prob, 5.0, 3.0, 1.0, x);
  CHECK(a.event.kind == b.event.kind);
  CHECK(static_cast<double>(b.end_u) == doctest::Approx(a.u.back()).epsilon(1e-9));
  CHECK(static_cast<double>(b.end_u) == doctest::Approx(b.u.back()).epsilon(1e-15));
}

TEST_CASE("invalid integrator input") {
  const auto prob = RadialProblem::pure_power(3, 3.0);
  CHECK_THROWS_AS(integrate(prob, 0.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(integrate(prob, 0.0, 1.0, 0.0), Error);
  IntegratorSettings bad;
  bad.rtol = 0.0;
  CHECK_THROWS_AS(integrate(prob, 0.0, 1.0, 1.0, bad), Error);
}

TEST_CASE("step budget exhaustion is an integration error") {
  IntegratorSettings s;
  s.max_steps = 10;
  s.max_step = 1e-4;
  try {
    integrate(RadialProblem::pure_power(3, 3.0), 0.0, 1.0, 1.0, s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integration);
  }
}

TEST_CASE("radial integral of e^{-2r} in three dimensions") {
  const auto p = sampled_exp(0.01, 40.0);
  // 4 pi int_0^inf e^{-2r} r^2 dr = pi
  const double m = radial_integral(p, [](double, double u, double) { return u * u; });
  CHECK(m == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
}

TEST_CASE("h1 distance: metric properties and refinement") {
  const auto coarse = sampled_exp(0.1, 30.0);
  const auto fine = sampled_exp(0.05, 30.0);
  const auto finer = sampled_exp(0.025, 30.0);
  CHECK(h1_distance(coarse, coarse) == 0.0);
  const double d1 = h1_distance(coarse, fine);
  CHECK(d1 == doctest::Approx(h1_distance(fine, coarse)));
  // both interpolate the same function: only interpolation error remains
  CHECK(d1 < 0.1 * 0.1 * 0.1);
  CHECK(h1_distance(fine, finer) < d1);
  CHECK(h1_distance(coarse, finer) <= d1 + h1_distance(fine, finer) + 1e-18);

  RadialProfile zero;
  zero.dimension = 3;
  // |e^{-r}|_{H^1}^2 = 2 pi
  CHECK(h1_distance(coarse, zero) == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-8));
}

TEST_CASE("derivative interpolant survives fine cells with large values") {
  // u = A e^{-r^2}, A large, cells much smaller than the scale of u
  RadialProfile p;
  p.dimension = 3;
  const double A = 150.0, h = 2e-6;
  for (int i = 0; i <= 1000; ++i) {
    const double r = i * h;
    p.r.push_back(r);
    p.u.push_back(A * std::exp(-r * r));
    p.du.push_back(-2 * r * A * std::exp(-r * r));
    p.ddu.push_back((4 * r * r - 2) * A * std::exp(-r * r));
  }
  double worst = 0.0;
  for (int i = 0; i < 997; ++i) {
    const double r = (i + 0.37) * h;
    worst = std::max(worst, std::abs(p.derivative(r) + 2 * r * A * std::exp(-r * r)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("profile invariants are checked") {
  RadialProfile p;
  p.dimension = 3;
  p.r = {0.0, 0.5, 0.4};
  p.u = {1.0, 0.5, 0.2};
  p.du = {0.0, -1.0, -1.0};
  CHECK_THROWS_AS(p.check(), Error);
}
