#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsmass/error.hpp"
#include "nlsmass/stability.hpp"
#include "oracles.hpp"

using namespace nlsmass;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

TEST_CASE("free radial Laplacian on the unit ball: (n pi)^2 in 3D, J0 zero in 2D") {
  const auto zero = [](double) { return 0.0; };
  const auto coarse = radial_operator_spectrum(3, 1.0, zero, 3, 1000);
  const auto fine = radial_operator_spectrum(3, 1.0, zero, 3, 2000);
  for (int n = 1; n <= 3; ++n) {
    const double exact = n * n * pi2;
    CHECK(std::abs(fine[n - 1] / exact - 1.0) < 1e-5);
    // second order: doubling the grid cuts the error about four times
    const double ratio = std::abs(coarse[n - 1] - exact) / std::abs(fine[n - 1] - exact);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
  }
  const double j0 = oracle::first_j0_zero();
  const auto two = radial_operator_spectrum(2, 1.0, zero, 1, 2000);
  CHECK(std::abs(two[0] / (j0 * j0) - 1.0) < 1e-5);
}

TEST_CASE("constant potential shifts the spectrum; harmonic well gives 3, 7, 11") {
  const auto shifted = radial_operator_spectrum(3, 1.0, [](double) { return -20.0; }, 2, 2000);
  CHECK(shifted[0] == doctest::Approx(pi2 - 20.0).epsilon(1e-5));
  CHECK(shifted[1] == doctest::Approx(4 * pi2 - 20.0).epsilon(1e-5));
  const auto ho = radial_operator_spectrum(3, 8.0, [](double r) { return r * r; }, 3, 4000);
  CHECK(ho[0] == doctest::Approx(3.0).epsilon(1e-4));
  CHECK(ho[1] == doctest::Approx(7.0).epsilon(1e-4));
  CHECK(ho[2] == doctest::Approx(11.0).epsilon(1e-4));
}

TEST_CASE("spectrum arguments are validated") {
  const auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(radial_operator_spectrum(3, 1.0, zero, 0, 100), Error);
  CHECK_THROWS_AS(radial_operator_spectrum(3, 1.0, zero, 1, 5), Error);
}

TEST_CASE("slope verdict uses a band of three error bars") {
  SlopeEstimate s;
  s.error = 0.1;
  s.slope = 0.31;
  CHECK(classify_slope(s) == Stability::Stable);
  s.slope = -0.31;
  CHECK(classify_slope(s) == Stability::Unstable);
  s.slope = 0.29;
  CHECK(classify_slope(s) == Stability::Inconclusive);
  s.slope = -0.29;
  CHECK(classify_slope(s) == Stability::Inconclusive);
}

TEST_CASE("linearisation at a ground state has one negative direction") {
  const auto prob = RadialProblem::pure_power(3, 3.0);
  for (double lambda : {-5.0, 5.0, 60.0}) {
    const auto gs = shoot_ground_state(prob, lambda);
    const auto ev = linearized_spectrum(prob, gs, 3);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0] < 0.0);
    CHECK(ev[1] > 1e-3);
    CHECK(ev[0] < ev[1]);
    CHECK(ev[1] < ev[2]);
  }
}

TEST_CASE("mass slope on the subcritical curve is positive and accurate") {
  CurveBudget b;
  b.initial = 24;
  b.refinements = 8;
  const auto curve = trace_mass_curve(RadialProblem::pure_power(3, 3.0), -9.0, 100.0, b);
  const double lambda = 10.0;
  const auto s = mass_slope(curve, lambda);
  CHECK(s.slope > 0.0);
  CHECK(s.error < 1e-2 * s.slope);
  // independent central difference with a different step
  const auto prob = curve.problem;
  const double h = 0.05;
  const double mp = std::sqrt(shoot_ground_state(prob, lambda + h).mass);
  const double mm = std::sqrt(shoot_ground_state(prob, lambda - h).mass);
  // the reported error covers the disagreement
  CHECK(std::abs(s.slope - (mp - mm) / (2 * h)) <= s.error);
  const auto v = classify_at_lambda(curve, lambda);
  CHECK(v.verdict == Stability::Stable);
  CHECK(v.negative_eigenvalues == 1);
  CHECK_FALSE(v.gap_warning);
}
