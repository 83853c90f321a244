#include "oracles.hpp"

#include <algorithm>
#include <numbers>

namespace oracle {

double bessel_j0(double x) {
  // sum_k (-1)^k (x/2)^{2k} / (k!)^2
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (double(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double first_j0_zero() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double sphere_area(int n) {
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

// Finite-volume pieces: stiffness K (tridiagonal, symmetric) and lumped
// mass M (cell volumes).
struct Fv {
  std::vector<double> vol, diag, off;  // off[i] couples i and i+1

  Fv(const FdGrid& g) {
    const int n = g.n;
    const double h = g.h();
    const double w = sphere_area(g.dimension);
    const int N = g.dimension;
    vol.resize(n);
    diag.assign(n, 0.0);
    off.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double a = i * h, b = (i + 1) * h;
      vol[i] = w * (std::pow(b, N) - std::pow(a, N)) / N;
    }
    for (int i = 0; i + 1 < n; ++i) {
      const double face = w * std::pow((i + 1) * h, N - 1) / h;
      diag[i] += face;
      diag[i + 1] += face;
      off[i] = -face;
    }
    // ghost value -u at the wall: half-cell distance
    diag[n - 1] += 2.0 * w * std::pow(g.radius, N - 1) / h;
  }

  // y = (K + lambda M) x
  std::vector<double> apply(const std::vector<double>& x, double lambda) const {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = (diag[i] + lambda * vol[i]) * x[i];
      if (i > 0) v += off[i - 1] * x[i - 1];
      if (i + 1 < n) v += off[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }

  // Solve (alpha M + beta K) x = rhs by the Thomas algorithm.
  std::vector<double> solve(double alpha, double beta, std::vector<double> rhs) const {
    const std::size_t n = rhs.size();
    std::vector<double> c(n), d(n);
    double b0 = alpha * vol[0] + beta * diag[0];
    c[0] = beta * off[0] / b0;
    d[0] = rhs[0] / b0;
    for (std::size_t i = 1; i < n; ++i) {
      const double a = beta * off[i - 1];
      const double b = alpha * vol[i] + beta * diag[i] - a * c[i - 1];
      c[i] = i + 1 < n ? beta * off[i] / b : 0.0;
      d[i] = (rhs[i] - a * d[i - 1]) / b;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double power_integral(const Fv& fv, const std::vector<double>& u, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += fv.vol[i] * std::pow(std::abs(u[i]), p);
  return s;
}

}  // namespace

FdSolution nehari_fd(const FdGrid& grid, double lambda, double p) {
  const Fv fv(grid);
  const int n = grid.n;
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = std::cos(0.5 * std::numbers::pi * grid.node(i) / grid.radius);
  }
  const double gamma = (p - 1.0) / (p - 2.0);
  FdSolution out;
  for (int it = 1; it <= 5000; ++it) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = fv.vol[i] * std::pow(std::abs(u[i]), p - 2.0) * u[i];
    const double s = dot(fv.apply(u, lambda), u) / dot(g, u);
    std::vector<double> w = fv.solve(lambda, 1.0, g);
    const double f = std::pow(s, gamma);
    double change = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double next = f * w[i];
      change = std::max(change, std::abs(next - u[i]));
      norm = std::max(norm, std::abs(next));
      u[i] = next;
    }
    out.iterations = it;
    if (change <= 1e-13 * norm) {
      out.converged = true;
      break;
    }
  }
  const double quad = dot(fv.apply(u, lambda), u);
  out.energy = 0.5 * quad - power_integral(fv, u, p) / p;
  out.mass = 0.0;
  for (int i = 0; i < n; ++i) out.mass += fv.vol[i] * u[i] * u[i];
  out.u = std::move(u);
  return out;
}

double gradient_flow_soliton_mass(int dimension, double p, double radius, int n,
                                  double tau, int max_steps) {
  const FdGrid grid{dimension, radius, n};
  const Fv fv(grid);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 2.0 * std::exp(-0.5 * grid.node(i) * grid.node(i));
  double mass = 0.0, prev = -1.0;
  for (int step = 0; step < max_steps; ++step) {
    // (M + tau (K + M)) v_new = M (v + tau |v|^{p-2} v)
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
      rhs[i] = fv.vol[i] * (v[i] + tau * std::pow(std::abs(v[i]), p - 2.0) * v[i]);
    }
    v = fv.solve(1.0 + tau, tau, rhs);
    // back onto the Nehari manifold: <Lv, v> = int |v|^p
    const double c = std::pow(dot(fv.apply(v, 1.0), v) / power_integral(fv, v, p),
                              1.0 / (p - 2.0));
    for (auto& x : v) x *= c;
    mass = 0.0;
    for (int i = 0; i < n; ++i) mass += fv.vol[i] * v[i] * v[i];
    if (std::abs(mass - prev) <= 1e-13 * mass) break;
    prev = mass;
  }
  return mass;
}

double inverse_power_H(double k, double s, double q, int dimension, double m, double r) {
  const double rk = std::pow(r, k);
  const double c = 2.0 * dimension - 4.0 - m - 2.0 * (m + 2.0) / q;
  return std::pow(r, m + 1.0) * std::pow(1.0 + rk, -s - 1.0) *
         (-2.0 * s * k * rk / q - c * (1.0 + rk));
}

}  // namespace oracle
