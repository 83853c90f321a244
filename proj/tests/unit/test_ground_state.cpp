#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlsmass/error.hpp"
#include "nlsmass/ground_state.hpp"
#include "oracles.hpp"

using namespace nlsmass;

TEST_CASE("first Dirichlet eigenvalue: pi^2, J0 zero squared, 1/R^2 scaling") {
  CHECK(std::abs(first_dirichlet_eigenvalue(3, 1.0) - std::numbers::pi * std::numbers::pi) < 1e-8);
  const double j0 = oracle::first_j0_zero();
  CHECK(std::abs(first_dirichlet_eigenvalue(2, 1.0) - j0 * j0) < 1e-6);
  for (int n : {2, 3, 4}) {
    const double l1 = first_dirichlet_eigenvalue(n, 1.0);
    for (double R : {0.5, 3.0}) {
      CHECK(std::abs(first_dirichlet_eigenvalue(n, R) * R * R / l1 - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("ground state matches the finite-difference Nehari minimiser") {
  for (auto [p, lambda] : {std::pair{3.0, 5.0}, std::pair{4.0, 0.0}, std::pair{2.5, 50.0}}) {
    CAPTURE(p);
    CAPTURE(lambda);
    const auto gs = shoot_ground_state(RadialProblem::pure_power(3, p), lambda);
    const auto fd = oracle::nehari_fd({3, 1.0, 2000}, lambda, p);
    REQUIRE(fd.converged);
    CHECK(std::abs(gs.energy / fd.energy - 1.0) < 1e-4);
    CHECK(std::abs(gs.mass / fd.mass - 1.0) < 1e-4);
    CHECK(gs.relative_residual() < 1e-8);
  }
}

TEST_CASE("ground state profile is positive, decreasing, and vanishes at R") {
  const auto gs = shoot_ground_state(RadialProblem::pure_power(3, 3.0, 2.0), 1.0);
  const auto& p = gs.profile;
  REQUIRE(p.size() > 10);
  CHECK(p.u.front() == doctest::Approx(gs.height));
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    CHECK(p.u[i] > 0.0);
    CHECK(p.u[i] < p.u[i - 1]);
  }
  CHECK(std::abs(p.u.back()) < 1e-8 * gs.height);
  CHECK(p.r.back() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(gs.mass == doctest::Approx(mass(p)));
}

TEST_CASE("energy equals (1/2 - 1/p) times the Nehari quadratic form") {
  // On the Nehari manifold J = (1/2 - 1/p) int |u|^p = (1/2 - 1/p)(|grad u|^2 + lambda m)
  const double p = 4.0, lambda = 5.0;
  const auto gs = shoot_ground_state(RadialProblem::pure_power(3, p), lambda);
  const double q = gs.gradient_norm_sq + lambda * gs.mass;
  CHECK(gs.energy == doctest::Approx((0.5 - 1.0 / p) * q).epsilon(1e-8));
}

TEST_CASE("lambda at or below -lambda_1 is rejected with its own kind") {
  const auto prob = RadialProblem::pure_power(3, 3.0);
  const double l1 = std::numbers::pi * std::numbers::pi;
  try {
    shoot_ground_state(prob, -l1 - 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BelowFirstEigenvalue);
  }
  CHECK_NOTHROW(shoot_ground_state(prob, -l1 + 0.5));
}

TEST_CASE("warm start and extended stepping give the same state") {
  const auto prob = RadialProblem::pure_power(3, 4.0);
  const auto cold = shoot_ground_state(prob, 20.0);
  const auto warm = shoot_ground_state(prob, 20.0, {}, cold.warm_start());
  CHECK(warm.height == doctest::Approx(cold.height).epsilon(1e-11));
  ShootingSettings x;
  x.ode.extended = true;
  const auto ext = shoot_ground_state(prob, 20.0, x);
  CHECK(ext.mass == doctest::Approx(cold.mass).epsilon(1e-9));
}

TEST_CASE("large lambda switches to matched shooting and stays accurate") {
  const auto gs = shoot_ground_state(RadialProblem::pure_power(3, 4.0), 1e3);
  CHECK(gs.method == ShootingMethod::Matched);
  CHECK(gs.relative_residual() < 1e-8);
}

TEST_CASE("whole-space soliton: decreasing, Bessel tail, matches gradient flow") {
  const auto q = solve_whole_space_Q(2, 4.0);
  CHECK(q.height > 0.0);
  CHECK(q.tail_mass < 1e-10 * q.mass);
  CHECK(q.mass_uncertainty < 1e-8 * q.mass);
  for (std::size_t i = 1; i < q.profile.size(); ++i) CHECK(q.profile.u[i] < q.profile.u[i - 1]);
  // tail is continuous with the profile at the cut
  CHECK(q.tail(q.r_cut) == doctest::Approx(q.profile.u.back()).epsilon(1e-4));
  const double flow = oracle::gradient_flow_soliton_mass(2, 4.0, 30.0, 6000);
  CHECK(std::abs(q.mass / flow - 1.0) < 1e-3);
}

TEST_CASE("whole-space soliton outside 2 < p < 2* is rejected") {
  CHECK_THROWS_AS(solve_whole_space_Q(3, 6.0), Error);
}
