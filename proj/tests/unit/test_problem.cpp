#include <doctest.h>

#include <cmath>
#include <limits>

#include "nlsmass/error.hpp"
#include "nlsmass/problem.hpp"

using namespace nlsmass;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an nlsmass::Error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("regime is decided exactly at 2 + 4/N") {
  CHECK(classify_regime(3, 3.0) == Regime::Subcritical);
  CHECK(classify_regime(3, mass_critical_exponent(3)) == Regime::MassCritical);
  CHECK(classify_regime(3, 4.0) == Regime::Supercritical);
  CHECK(classify_regime(2, 4.0) == Regime::MassCritical);
  CHECK(classify_regime(2, std::nextafter(4.0, 5.0)) == Regime::Supercritical);
  CHECK(classify_regime(2, std::nextafter(4.0, 3.0)) == Regime::Subcritical);
  CHECK(classify_regime(4, 3.0) == Regime::MassCritical);
}

TEST_CASE("Sobolev exponent and parameter validation") {
  CHECK(sobolev_exponent(3) == doctest::Approx(6.0));
  CHECK(std::isinf(sobolev_exponent(2)));
  CHECK(kind_of([] { RadialProblem::pure_power(1, 3.0); }) == ErrorKind::Validation);
  CHECK(kind_of([] { RadialProblem::pure_power(3, 2.0); }) == ErrorKind::Validation);
  CHECK(kind_of([] { RadialProblem::pure_power(3, 6.0); }) == ErrorKind::Validation);
  CHECK(kind_of([] { RadialProblem::pure_power(3, 3.0, 0.0); }) == ErrorKind::Validation);
  CHECK(kind_of([] { RadialProblem::pure_power(3, 3.0, -1.0); }) == ErrorKind::Validation);
  CHECK(kind_of([] { Weight::inverse_power(2.0, -1.0); }) == ErrorKind::Validation);
  CHECK_NOTHROW(RadialProblem::pure_power(2, 40.0));
}

TEST_CASE("signed and absolute powers") {
  CHECK(signed_power(0.0, 2.5) == 0.0);
  CHECK(signed_power(-2.0, 2.0) == doctest::Approx(-4.0));
  CHECK(signed_power(3.0, 0.5) == doctest::Approx(std::sqrt(3.0)));
  CHECK(abs_power(-2.0, 3.0) == doctest::Approx(8.0));
  CHECK(abs_power(0.0, 1.5) == 0.0);
}

TEST_CASE("f, f_u and F are consistent (odd in u, F' = f, f' = f_u)") {
  const RadialProblem prob(3, 3.5, 1.0, Weight::inverse_power(2.0, 1.0, 1.5),
                           Perturbation::power(0.3, 2.5));
  for (double r : {0.0, 0.2, 0.7, 1.0}) {
    for (double u : {0.1, 0.8, 2.5}) {
      CHECK(prob.f(r, -u) == doctest::Approx(-prob.f(r, u)).epsilon(1e-14));
      const double h = 1e-5 * u;
      const double dF = (prob.F(r, u + h) - prob.F(r, u - h)) / (2 * h);
      CHECK(dF == doctest::Approx(prob.f(r, u)).epsilon(1e-8));
      const double df = (prob.f(r, u + h) - prob.f(r, u - h)) / (2 * h);
      CHECK(df == doctest::Approx(prob.f_u(r, u)).epsilon(1e-8));
      CHECK(static_cast<double>(prob.f_ext(r, u)) ==
            doctest::Approx(prob.f(r, u)).epsilon(1e-14));
    }
  }
}

TEST_CASE("inverse-power weight values") {
  const auto w = Weight::inverse_power(2.0, 3.0, 2.0);
  CHECK(w.value(0.0) == doctest::Approx(2.0));
  CHECK(w.value(1.0) == doctest::Approx(2.0 / 8.0));
  // d/dr 2 (1 + r^2)^{-3} = -12 r (1 + r^2)^{-4}
  CHECK(w.derivative(0.5) == doctest::Approx(-6.0 * std::pow(1.25, -4.0)));
  const RadialProblem prob(3, 3.0, 1.0, w);
  CHECK(prob.weight_at_origin() == doctest::Approx(2.0));
  CHECK_FALSE(prob.is_pure_power());
  CHECK(RadialProblem::pure_power(3, 3.0).is_pure_power());
}

TEST_CASE("derived problems keep everything but the changed field") {
  const auto base = RadialProblem::pure_power(3, 3.0, 1.0);
  const auto big = base.with_radius(2.0);
  CHECK(big.radius() == 2.0);
  CHECK(big.exponent() == base.exponent());
  const auto heavy = base.with_weight_scaled(3.0);
  CHECK(heavy.f(0.3, 2.0) == doctest::Approx(3.0 * base.f(0.3, 2.0)));
}

TEST_CASE("hypothesis probe is report-only and passes for the pure power") {
  const auto prob = RadialProblem::pure_power(3, 4.0);
  const auto rep = validate_problem(prob, ProbeGrid::uniform(1.0));
  CHECK_FALSE(rep.any_fail());
}
