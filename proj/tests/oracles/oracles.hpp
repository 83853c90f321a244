#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's solvers.

#include <cmath>
#include <vector>

namespace oracle {

// J_0 by its power series (fine for x < 10).
double bessel_j0(double x);

// First positive zero of J_0 by bisection on the series.
double first_j0_zero();

// Radial grid for finite differences on [0, R] with Dirichlet data at R:
// nodes r_i = (i + 1/2) h, i = 0..n-1, h = R / n (cell centres).
struct FdGrid {
  int dimension = 3;
  double radius = 1.0;
  int n = 2000;
  double h() const { return radius / n; }
  double node(int i) const { return (i + 0.5) * h(); }
};

struct FdSolution {
  std::vector<double> u;  // values at the nodes
  double energy = 0.0;    // 1/2 |grad u|^2 + lambda/2 |u|^2 - 1/p |u|^p
  double mass = 0.0;      // |u|^2
  int iterations = 0;
  bool converged = false;
};

// Positive ground state of -Delta u + lambda u = |u|^{p-2} u on B_R by
// Petviashvili iteration on the finite-volume discretisation; this is the
// minimiser of the energy on the discrete Nehari manifold.
FdSolution nehari_fd(const FdGrid& grid, double lambda, double p);

// Mass of the whole-space soliton -Delta v + v = |v|^{p-2} v obtained by a
// semi-implicit imaginary-time flow projected onto the Nehari manifold, on
// the ball of radius `radius` with `n` cells.
double gradient_flow_soliton_mass(int dimension, double p, double radius, int n,
                                  double tau = 0.5, int max_steps = 20000);

// H(r;m) for h = (1 + r^k)^{-s} written out by hand:
// r^{m+1} (1+r^k)^{-s-1} [ -2 s k r^k / q - c (1 + r^k) ],
// c = 2N - 4 - m - 2(m+2)/q.
double inverse_power_H(double k, double s, double q, int dimension, double m, double r);

}  // namespace oracle
