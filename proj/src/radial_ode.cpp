#include "nlsmass/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "nlsmass/error.hpp"

namespace nlsmass {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::ReachedEnd: return "reached_end";
    case EventKind::ZeroCrossing: return "zero_crossing";
    case EventKind::Blowup: return "blowup";
    case EventKind::Minimum: return "minimum";
  }
  return "unknown";
}

namespace {

template <typename T>
using Vec2 = std::array<T, 2>;  // (u, u')

// Dormand-Prince 5(4) tableau, exact to long double.
constexpr long double c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr long double a21 = 1.0L / 5;
constexpr long double a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr long double a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr long double a51 = 19372.0L / 6561, a52 = -25360.0L / 2187,
                      a53 = 64448.0L / 6561, a54 = -212.0L / 729;
constexpr long double a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
                      a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr long double b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192,
                      b5 = -2187.0L / 6784, b6 = 11.0L / 84;
constexpr long double e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
                      e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

template <typename T>
class RadialRhs {
 public:
  RadialRhs(const RadialProblem& problem, double lambda)
      : problem_(problem), lambda_(lambda), nm1_(problem.dimension() - 1) {}

  T f(T r, T u) const {
    if constexpr (std::is_same_v<T, double>) {
      return problem_.f(r, u);
    } else {
      return problem_.f_ext(r, u);
    }
  }

  Vec2<T> operator()(T r, const Vec2<T>& y) const {
    const T fv = f(r, y[0]);
    if (!std::isfinite(fv)) {
      std::ostringstream os;
      os.precision(17);
      os << "nonlinearity is not finite at r = " << static_cast<double>(r)
         << ", u = " << static_cast<double>(y[0]);
      throw Error(ErrorKind::Evaluation, os.str());
    }
    const T src = lambda_ * y[0] - fv;
    if (r == 0) return {y[1], src / (nm1_ + 1)};
    return {y[1], src - nm1_ / r * y[1]};
  }

  T source(T r, T u) const { return lambda_ * u - f(r, u); }

 private:
  const RadialProblem& problem_;
  T lambda_;
  T nm1_;
};

template <typename T>
struct StepResult {
  Vec2<T> y;
  Vec2<T> k7;
  double err;
};

template <typename T>
StepResult<T> dp_step(const RadialRhs<T>& rhs, T r, const Vec2<T>& y, const Vec2<T>& k1,
                      T h, double rtol, double atol) {
  auto axpy = [&](std::initializer_list<std::pair<long double, const Vec2<T>*>> terms) {
    Vec2<T> out = y;
    for (auto [c, k] : terms) {
      out[0] += h * static_cast<T>(c) * (*k)[0];
      out[1] += h * static_cast<T>(c) * (*k)[1];
    }
    return out;
  };
  auto at = [&](long double c) { return r + static_cast<T>(c) * h; };
  const Vec2<T> k2 = rhs(at(c2), axpy({{a21, &k1}}));
  const Vec2<T> k3 = rhs(at(c3), axpy({{a31, &k1}, {a32, &k2}}));
  const Vec2<T> k4 = rhs(at(c4), axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const Vec2<T> k5 =
      rhs(at(c5), axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const Vec2<T> k6 = rhs(
      r + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const Vec2<T> ynew =
      axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const Vec2<T> k7 = rhs(r + h, ynew);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const T e = h * (static_cast<T>(e1) * k1[i] + static_cast<T>(e3) * k3[i] +
                     static_cast<T>(e4) * k4[i] + static_cast<T>(e5) * k5[i] +
                     static_cast<T>(e6) * k6[i] + static_cast<T>(e7) * k7[i]);
    const double sc = atol + rtol * static_cast<double>(
                                        std::max(std::abs(y[i]), std::abs(ynew[i])));
    const double q = static_cast<double>(e) / sc;
    err += q * q;
  }
  return {ynew, k7, std::sqrt(0.5 * err)};
}

template <typename T>
bool sign_changed(T before, T after) {
  return (before > 0 && after <= 0) || (before < 0 && after >= 0);
}

template <typename T>
void push(RadialProfile& out, T r, const Vec2<T>& y, T ddu) {
  out.r.push_back(static_cast<double>(r));
  out.u.push_back(static_cast<double>(y[0]));
  out.du.push_back(static_cast<double>(y[1]));
  out.ddu.push_back(static_cast<double>(ddu));
  out.end_u = y[0];
  out.end_du = y[1];
}

// Adaptive march from (r0, y0) to r1 with event detection. Appends
// accepted points (excluding the start) to `out`.
template <typename T>
void march(const RadialRhs<T>& rhs, T r0, Vec2<T> y0, T r1,
           const IntegratorSettings& s, double atol, double u_max, double h_cap,
           RadialProfile& out) {
  const T dir = r1 >= r0 ? 1 : -1;
  const T span = std::abs(r1 - r0);
  T r = r0;
  Vec2<T> y = y0;
  Vec2<T> k1 = rhs(r, y);
  T h = std::min(static_cast<T>(h_cap), static_cast<T>(1e-3L) * span);
  if (!(h > 0)) h = span;
  std::size_t steps = 0;
  const T eps = std::numeric_limits<T>::epsilon();

  while (dir * (r1 - r) > 0) {
    if (++steps > s.max_steps) {
      std::ostringstream os;
      os.precision(17);
      os << "step budget exhausted; last reliable radius r = " << static_cast<double>(r);
      throw Error(ErrorKind::Integration, os.str());
    }
    const T remaining = std::abs(r1 - r);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    const StepResult<T> st = dp_step(rhs, r, y, k1, dir * h, s.rtol, atol);
    if (!(st.err <= 1.0)) {
      const double fac = std::isfinite(st.err)
                             ? std::max(0.2, 0.9 * std::pow(st.err, -0.2))
                             : 0.2;
      h *= fac;
      if (h < 16 * eps * std::max(T(1), std::abs(r))) {
        std::ostringstream os;
        os.precision(17);
        os << "step size underflow; last reliable radius r = " << static_cast<double>(r);
        throw Error(ErrorKind::Integration, os.str());
      }
      continue;
    }
    // A full step may still round onto r1.
    if (!last && !(dir * (r1 - (r + dir * h)) > 0)) last = true;
    const T rnew = last ? r1 : r + dir * h;

    if (sign_changed(y[0], st.y[0])) {
      // Bisect on the step length, re-stepping from the accepted start.
      T lo = 0, hi = h;
      Vec2<T> yc = st.y;
      T rc = rnew;
      for (int it = 0; it < 200; ++it) {
        const T mid = (lo + hi) / 2;
        const Vec2<T> ym = dp_step(rhs, r, y, k1, dir * mid, s.rtol, atol).y;
        if (sign_changed(y[0], ym[0])) {
          hi = mid;
          yc = ym;
          rc = r + dir * mid;
        } else {
          lo = mid;
        }
        if (std::abs(yc[0]) < atol && hi - lo <= 4 * eps * std::abs(rc)) break;
        if (hi - lo <= 2 * eps * std::abs(rc)) break;
      }
      push(out, rc, yc, rhs(rc, yc)[1]);
      out.event = {EventKind::ZeroCrossing, static_cast<double>(rc)};
      return;
    }
    if (std::abs(st.y[0]) > u_max) {
      push(out, rnew, st.y, st.k7[1]);
      out.event = {EventKind::Blowup, static_cast<double>(rnew)};
      return;
    }
    if (s.stop_at_minimum && y[1] < 0 && st.y[1] >= 0 && st.y[0] > 0) {
      push(out, rnew, st.y, st.k7[1]);
      out.event = {EventKind::Minimum, static_cast<double>(rnew)};
      return;
    }
    r = rnew;
    y = st.y;
    k1 = st.k7;
    if (s.record || last) push(out, r, y, k1[1]);
    const double fac = st.err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(st.err, -0.2), 0.2, 5.0);
    h = std::min(h * static_cast<T>(fac), static_cast<T>(h_cap));
  }
  out.event = {EventKind::ReachedEnd, static_cast<double>(r1)};
}

double auto_cap(const RadialProblem& problem, double lambda, double a, double span) {
  const double stiff = 1.0 + std::abs(lambda) + std::abs(problem.f_u(0.0, a));
  return std::min(span / 2048.0, 0.005 / std::sqrt(stiff));
}

template <typename T>
RadialProfile integrate_impl(const RadialProblem& problem, double lambda, T a,
                             double r_end, const IntegratorSettings& settings) {
  const RadialRhs<T> rhs(problem, lambda);
  const int n = problem.dimension();
  const double ad = static_cast<double>(a);
  const double scale = std::max(ad, std::numeric_limits<double>::min());
  const double atol = settings.atol * scale;
  const double u_max = settings.u_max > 0.0 ? settings.u_max : 1e8 * std::max(ad, 1.0);
  const double stiff = 1.0 + std::abs(lambda) + std::abs(problem.f_u(0.0, ad));
  double r_s = settings.r_series > 0.0
                   ? settings.r_series
                   : std::min(1e-4 * r_end, 1e-3 / std::sqrt(stiff));
  r_s = std::min(r_s, 0.5 * r_end);
  const T rs = r_s;

  // Regular series start: Picard iteration on a quadratic fit of the source.
  T s0 = 0, s1 = 0, s2 = 0;
  auto series = [&](T r) -> Vec2<T> {
    return {a + s0 * r * r / (2 * n) + s1 * r * r * r / (3 * (n + 1)) +
                s2 * r * r * r * r / (4 * (n + 2)),
            s0 * r / n + s1 * r * r / (n + 1) + s2 * r * r * r / (n + 2)};
  };
  for (int it = 0; it < 4; ++it) {
    const T f0 = rhs.source(0, a);
    const T fh = rhs.source(rs / 2, series(rs / 2)[0]);
    const T f1 = rhs.source(rs, series(rs)[0]);
    const T A = fh - f0, B = f1 - f0;
    s0 = f0;
    s2 = 2 * (B - 2 * A) / (rs * rs);
    s1 = (B - s2 * rs * rs) / rs;
  }
  if (!std::isfinite(s0) || !std::isfinite(s1) || !std::isfinite(s2)) {
    throw Error(ErrorKind::Evaluation, "nonlinearity is not finite near the origin");
  }

  RadialProfile out;
  out.dimension = n;
  push(out, T(0), Vec2<T>{a, 0}, rhs(0, {a, 0})[1]);
  const Vec2<T> ys = series(rs);
  if (sign_changed(a, ys[0])) {
    // Degenerate: the series interval already crosses zero.
    push(out, rs, ys, rhs(rs, ys)[1]);
    out.event = {EventKind::ZeroCrossing, r_s};
    return out;
  }
  if (settings.record) push(out, rs, ys, rhs(rs, ys)[1]);
  const double cap = settings.max_step > 0.0
                         ? settings.max_step
                         : (settings.record ? auto_cap(problem, lambda, ad, r_end)
                                            : r_end / 8.0);
  march(rhs, rs, ys, T(r_end), settings, atol, u_max, cap, out);
  return out;
}

template <typename T>
RadialProfile segment_impl(const RadialProblem& problem, double lambda, double r0, T u0,
                           T du0, double r1, const IntegratorSettings& settings,
                           double scale) {
  const RadialRhs<T> rhs(problem, lambda);
  RadialProfile out;
  out.dimension = problem.dimension();
  push(out, T(r0), Vec2<T>{u0, du0}, rhs(r0, {u0, du0})[1]);
  if (r0 == r1) return out;
  const double atol = settings.atol * std::max(scale, std::numeric_limits<double>::min());
  const double u_max = settings.u_max > 0.0
                           ? settings.u_max
                           : 1e8 * std::max(std::abs(static_cast<double>(u0)), 1.0);
  const double span = std::abs(r1 - r0);
  const double cap = settings.max_step > 0.0 ? settings.max_step : span / 8.0;
  march(rhs, T(r0), Vec2<T>{u0, du0}, T(r1), settings, atol, u_max, cap, out);
  return out;
}

}  // namespace

RadialProfile integrate(const RadialProblem& problem, double lambda, long double a,
                        double r_end, const IntegratorSettings& settings) {
  if (!(a >= 0.0L) || !std::isfinite(a)) {
    throw Error(ErrorKind::Validation, "initial height must satisfy a >= 0");
  }
  if (!(r_end > 0.0)) {
    throw Error(ErrorKind::Validation, "integration end must satisfy r_end > 0");
  }
  if (!(settings.rtol > 0.0) || !(settings.atol > 0.0)) {
    throw Error(ErrorKind::Validation, "tolerances must be positive");
  }
  if (settings.extended) return integrate_impl<long double>(problem, lambda, a, r_end, settings);
  return integrate_impl<double>(problem, lambda, static_cast<double>(a), r_end, settings);
}

RadialProfile integrate_segment(const RadialProblem& problem, double lambda,
                                double r0, long double u0, long double du0, double r1,
                                const IntegratorSettings& settings, double scale) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) {
    throw Error(ErrorKind::Validation, "segment endpoints must be positive");
  }
  if (settings.extended) {
    return segment_impl<long double>(problem, lambda, r0, u0, du0, r1, settings, scale);
  }
  return segment_impl<double>(problem, lambda, r0, static_cast<double>(u0),
                              static_cast<double>(du0), r1, settings, scale);
}

// ------------------------------------------------------------- profiles

double unit_sphere_area(int dimension) {
  // 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(M_PI, 0.5 * dimension) / std::tgamma(0.5 * dimension);
}

namespace {

std::size_t locate(const std::vector<double>& r, double x) {
  auto it = std::upper_bound(r.begin(), r.end(), x);
  std::size_t i = static_cast<std::size_t>(it - r.begin());
  if (i == 0) return 0;
  if (i >= r.size()) return r.size() - 2;
  return i - 1;
}

}  // namespace

double RadialProfile::value(double x) const {
  if (r.size() < 2 || x < r.front() || x > r.back()) return 0.0;
  const std::size_t i = locate(r, x);
  const double h = r[i + 1] - r[i];
  double v, d;
  detail::cell_eval(*this, i, (x - r[i]) / h, v, d);
  return v;
}

double RadialProfile::derivative(double x) const {
  if (r.size() < 2 || x < r.front() || x > r.back()) return 0.0;
  const std::size_t i = locate(r, x);
  const double h = r[i + 1] - r[i];
  double v, d;
  detail::cell_eval(*this, i, (x - r[i]) / h, v, d);
  return d;
}

void RadialProfile::check() const {
  if (dimension < 1) throw Error(ErrorKind::Validation, "profile dimension unset");
  if (r.size() < 2 || u.size() != r.size() || du.size() != r.size()) {
    throw Error(ErrorKind::Validation, "profile arrays must have equal length >= 2");
  }
  if (!ddu.empty() && ddu.size() != r.size()) {
    throw Error(ErrorKind::Validation, "second-derivative samples do not match the grid");
  }
  if (r.front() != 0.0 || du.front() != 0.0) {
    throw Error(ErrorKind::Validation, "profile must start at r = 0 with u'(0) = 0");
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) {
      throw Error(ErrorKind::Validation, "profile grid must be strictly increasing");
    }
  }
}

double h1_distance(const RadialProfile& a, const RadialProfile& b) {
  if (a.dimension != b.dimension) {
    throw Error(ErrorKind::Validation, "h1_distance: profiles have different dimensions");
  }
  std::vector<double> grid;
  grid.reserve(a.r.size() + b.r.size());
  std::merge(a.r.begin(), a.r.end(), b.r.begin(), b.r.end(), std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Cell-local evaluation with monotone cursors.
  struct Cursor {
    const RadialProfile& p;
    std::size_t i = 0;
    void eval(double x, double& v, double& d) {
      if (p.r.size() < 2 || x < p.r.front() || x > p.r.back()) {
        v = d = 0.0;
        return;
      }
      while (i + 2 < p.r.size() && p.r[i + 1] < x) ++i;
      const double h = p.r[i + 1] - p.r[i];
      detail::cell_eval(p, i, (x - p.r[i]) / h, v, d);
    }
  };
  Cursor ca{a}, cb{b};
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double lo = grid[j];
    const double h = grid[j + 1] - lo;
    double cell = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double x = lo + 0.5 * h * (detail::Gauss5::x[q] + 1.0);
      double ua, da, ub, db;
      ca.eval(x, ua, da);
      cb.eval(x, ub, db);
      const double du = ua - ub, dd = da - db;
      cell += detail::Gauss5::w[q] * (du * du + dd * dd) *
              detail::radial_power(x, a.dimension);
    }
    acc += 0.5 * h * cell;
  }
  return std::sqrt(unit_sphere_area(a.dimension) * acc);
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile,
                       double lambda, double a) {
  const auto old = os.precision(17);
  os << "# N=" << profile.dimension << " lambda=" << lambda << " a=" << a
     << " event=" << to_string(profile.event.kind) << "@" << profile.event.radius
     << "\n";
  os << "r,u,du\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << profile.r[i] << "," << profile.u[i] << "," << profile.du[i] << "\n";
  }
  os.precision(old);
}

}  // namespace nlsmass
