#pragma once

#include <cmath>
#include <limits>
#include <cstddef>

namespace nlsmass {

namespace detail {

struct Gauss5 {
  static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                  0.5384693101056831, 0.9061798459386640};
  static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665,
                                  0.5688888888888889, 0.4786286704993665,
                                  0.2369268850561891};
};

// Cubic Hermite value and derivative at local coordinate t in [0,1].
inline void hermite(double u0, double d0, double u1, double d1, double h,
                    double t, double& u, double& du) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  u = h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1;
  const double g00 = 6 * t2 - 6 * t;
  const double g10 = 3 * t2 - 4 * t + 1;
  const double g01 = -6 * t2 + 6 * t;
  const double g11 = 3 * t2 - 2 * t;
  du = (g00 * u0 + g01 * u1) / h + g10 * d0 + g11 * d1;
}

// Quintic Hermite from (u, u', u'') at both ends.
inline void quintic(double u0, double d0, double s0, double u1, double d1, double s1,
                    double h, double t, double& u, double& du) {
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 0.5 * (t3 - 2 * t4 + t5);
  const double G0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double G1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double G2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double G4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double G5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  u = H0 * u0 + h * H1 * d0 + h * h * H2 * s0 + H3 * u1 + h * H4 * d1 + h * h * H5 * s1;
  du = G0 * (u0 - u1) / h + G1 * d0 + h * G2 * s0 + G4 * d1 + h * G5 * s1;
}

// Interpolant of cell i at local coordinate t.
inline void cell_eval(const RadialProfile& p, std::size_t i, double t, double& u,
                      double& du) {
  const double h = p.r[i + 1] - p.r[i];
  if (p.has_second()) {
    double unused;
    quintic(p.u[i], p.du[i], p.ddu[i], p.u[i + 1], p.du[i + 1], p.ddu[i + 1], h, t, u, unused);
    // Quintic u' = cubic Hermite of (u', u'') + 30 rho/h t^2 (1-t)^2, rho the
    // residual of the cell's integral identity. On fine cells rho is pure
    // rounding of u (|u| >> |u'| h); drop it there instead of dividing by h.
    hermite(p.du[i], p.ddu[i], p.du[i + 1], p.ddu[i + 1], h, t, du, unused);
    const double rho = (p.u[i + 1] - p.u[i]) - 0.5 * h * (p.du[i] + p.du[i + 1]) -
                       h * h / 12.0 * (p.ddu[i] - p.ddu[i + 1]);
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                         (std::abs(p.u[i]) + std::abs(p.u[i + 1]) +
                          h * (std::abs(p.du[i]) + std::abs(p.du[i + 1])));
    if (std::abs(rho) > noise) {
      const double w = t * (1.0 - t);
      du += 30.0 * rho / h * w * w;
    }
  } else {
    hermite(p.u[i], p.du[i], p.u[i + 1], p.du[i + 1], h, t, u, du);
  }
}

inline double radial_power(double r, int dimension) {
  double w = 1.0;
  for (int i = 1; i < dimension; ++i) w *= r;
  return w;
}

}  // namespace detail

template <typename Fn>
double radial_integral(const RadialProfile& p, Fn&& integrand) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.r.size(); ++i) {
    const double a = p.r[i];
    const double h = p.r[i + 1] - a;
    if (h <= 0.0) continue;
    double cell = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double t = 0.5 * (detail::Gauss5::x[q] + 1.0);
      const double x = a + h * t;
      double u, du;
      detail::cell_eval(p, i, t, u, du);
      cell += detail::Gauss5::w[q] * integrand(x, u, du) *
              detail::radial_power(x, p.dimension);
    }
    acc += 0.5 * h * cell;
  }
  return unit_sphere_area(p.dimension) * acc;
}

}  // namespace nlsmass
