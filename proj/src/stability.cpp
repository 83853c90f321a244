#include "nlsmass/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlsmass/error.hpp"
#include "nlsmass/parallel.hpp"

namespace nlsmass {

namespace {

// Symmetric tridiagonal matrix: diagonal a, off-diagonal b (b[i] couples i, i+1).
struct Tridiag {
  std::vector<double> a;
  std::vector<double> b;

  // Number of eigenvalues below x (Sturm count via LDL^T pivots).
  int count_below(double x) const {
    int count = 0;
    double d = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
      d = a[i] - x - (i == 0 ? 0.0 : off / d);
      if (d == 0.0) d = -tiny;
      if (d < 0.0) ++count;
    }
    return count;
  }

  void gershgorin(double& lo, double& hi) const {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double rad = (i > 0 ? std::abs(b[i - 1]) : 0.0) +
                         (i + 1 < a.size() ? std::abs(b[i]) : 0.0);
      lo = std::min(lo, a[i] - rad);
      hi = std::max(hi, a[i] + rad);
    }
  }

  // Solve (T - shift) x = rhs by Thomas elimination; rhs overwritten.
  bool solve_shifted(double shift, std::vector<double>& x) const {
    const std::size_t n = a.size();
    std::vector<double> c(n), d(n);
    double piv = a[0] - shift;
    if (piv == 0.0) piv = 1e-300;
    c[0] = n > 1 ? b[0] / piv : 0.0;
    d[0] = x[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
      piv = a[i] - shift - b[i - 1] * c[i - 1];
      if (piv == 0.0) piv = 1e-300;
      c[i] = i + 1 < n ? b[i] / piv : 0.0;
      d[i] = (x[i] - b[i - 1] * d[i - 1]) / piv;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
  }

  double rayleigh(const std::vector<double>& v) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double tv = a[i] * v[i];
      if (i > 0) tv += b[i - 1] * v[i - 1];
      if (i + 1 < a.size()) tv += b[i] * v[i + 1];
      num += v[i] * tv;
      den += v[i] * v[i];
    }
    return num / den;
  }
};

// k-th smallest (0-based) by bisection, then a few inverse-iteration steps.
double eigenvalue(const Tridiag& t, int k, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t.count_below(mid) > k) hi = mid; else lo = mid;
    if (hi - lo <= 1e-10 * std::max(1.0, std::abs(mid))) break;
  }
  double mu = 0.5 * (lo + hi);
  const double width = hi - lo;
  std::vector<double> v(t.a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * i);
  for (int it = 0; it < 3; ++it) {
    if (!t.solve_shifted(mu, v)) break;
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) break;
    for (double& x : v) x /= nrm;
  }
  const double rq = t.rayleigh(v);
  // Keep the refined value only if it stays in the isolating bracket.
  if (std::isfinite(rq) && std::abs(rq - mu) <= width) mu = rq;
  if (!std::isfinite(mu)) throw Error(ErrorKind::Numeric, "eigenvalue iteration failed");
  return mu;
}

double unsquared_mass(const GroundState& gs) { return std::sqrt(gs.mass); }

}  // namespace

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

SlopeEstimate mass_slope(const MassCurve& curve, double lambda,
                         const ShootingSettings& settings) {
  const auto& s = curve.samples;
  if (s.size() < 2) throw Error(ErrorKind::Validation, "mass curve has too few samples");
  if (!(lambda >= s.front().lambda && lambda <= s.back().lambda)) {
    std::ostringstream os;
    os.precision(17);
    os << "slope requested at lambda = " << lambda << " outside the traced range ["
       << s.front().lambda << ", " << s.back().lambda << "]";
    throw Error(ErrorKind::Validation, os.str());
  }
  auto it = std::lower_bound(s.begin(), s.end(), lambda,
                             [](const CurveSample& x, double l) { return x.lambda < l; });
  std::size_t i = it == s.end() ? s.size() - 1 : std::size_t(it - s.begin());
  if (i == 0) i = 1;
  const double spacing = s[i].lambda - s[i - 1].lambda;

  double h = std::max(1e-3 * (1.0 + std::abs(lambda)), spacing);
  // Stay clear of -lambda_1 where the branch degenerates.
  h = std::min(h, 0.5 * (lambda + curve.lambda1));

  const double offs[4] = {-h, -0.5 * h, 0.5 * h, h};
  auto near = curve.nearest(lambda);
  const auto ms = parallel_map<double>(4, [&](std::size_t j) {
    const auto gs = shoot_ground_state(curve.problem, lambda + offs[j], curve.lambda1,
                                       settings, WarmStart{near.height, near.method});
    return unsquared_mass(gs);
  });
  const double d1 = (ms[3] - ms[0]) / (2.0 * h);
  const double d2 = (ms[2] - ms[1]) / h;

  SlopeEstimate out;
  out.step = h;
  out.slope = (4.0 * d2 - d1) / 3.0;
  const double m = 0.5 * (ms[1] + ms[2]);
  const double noise = 10.0 * std::max(settings.ode.rtol, 1e-15) * m / h;
  out.error = std::abs(d2 - d1) / 3.0 + noise;
  out.mass = m;
  return out;
}

Stability classify_slope(const SlopeEstimate& s) {
  const double band = 3.0 * s.error;
  if (s.slope > band) return Stability::Stable;
  if (s.slope < -band) return Stability::Unstable;
  return Stability::Inconclusive;
}

std::vector<double> radial_operator_spectrum(
    int dimension, double radius, const std::function<double(double)>& potential,
    int k, int points) {
  if (k < 1) throw Error(ErrorKind::Validation, "at least one eigenvalue must be requested");
  if (points < 10) throw Error(ErrorKind::Validation, "spectrum grid too coarse");
  if (k > points) throw Error(ErrorKind::Validation, "more eigenvalues than grid points");
  const int n = points;
  const double N = dimension;
  const double h = radius / n;
  // Nodes r_i = i h, i = 0..n-1; u(R) = 0. Cell i is [r_i - h/2, r_i + h/2]
  // clipped at 0; fluxes through the faces r_{i+1/2}.
  std::vector<double> vol(n), flux(n);
  for (int i = 0; i < n; ++i) {
    const double lo = std::max(0.0, (i - 0.5) * h);
    const double hi = (i + 0.5) * h;
    vol[i] = (std::pow(hi, N) - std::pow(lo, N)) / N;
    flux[i] = std::pow(hi, N - 1.0) / h;  // face i+1/2
  }
  Tridiag t;
  t.a.resize(n);
  t.b.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? flux[i - 1] : 0.0;
    t.a[i] = (left + flux[i]) / vol[i] + potential(i * h);
    if (i + 1 < n) t.b[i] = -flux[i] / std::sqrt(vol[i] * vol[i + 1]);
  }
  double lo, hi;
  t.gershgorin(lo, hi);
  std::vector<double> out(k);
  for (int j = 0; j < k; ++j) out[j] = eigenvalue(t, j, lo, hi);
  return out;
}

std::vector<double> linearized_spectrum(const RadialProblem& problem,
                                        const GroundState& gs, int k,
                                        const SpectrumSettings& settings) {
  const double lambda = gs.lambda;
  const auto& prof = gs.profile;
  auto potential = [&](double r) {
    return lambda - problem.f_u(r, prof.value(r));
  };
  return radial_operator_spectrum(problem.dimension(), problem.radius(), potential, k,
                                  settings.points);
}

StabilityVerdict classify_at_lambda(const MassCurve& curve, double lambda,
                                    const ShootingSettings& settings,
                                    const SpectrumSettings& spectrum) {
  const auto slope = mass_slope(curve, lambda, settings);
  const auto& near = curve.nearest(lambda);
  const auto gs = shoot_ground_state(curve.problem, lambda, curve.lambda1, settings,
                                     WarmStart{near.height, near.method});
  StabilityVerdict v;
  v.lambda = lambda;
  v.mass = unsquared_mass(gs);
  v.slope = slope.slope;
  v.slope_err = slope.error;
  v.verdict = classify_slope(slope);
  const auto ev = linearized_spectrum(curve.problem, gs, 3, spectrum);
  v.nondeg_gap = std::numeric_limits<double>::infinity();
  for (double e : ev) {
    v.nondeg_gap = std::min(v.nondeg_gap, std::abs(e));
    if (e < 0.0) ++v.negative_eigenvalues;
  }
  v.gap_warning = v.nondeg_gap < spectrum.gap_tolerance;
  return v;
}

MassStability classify_at_mass(const MassCurve& curve, double c,
                               const ShootingSettings& settings,
                               const SpectrumSettings& spectrum) {
  MassStability out;
  out.lookup = mass_lookup(curve, c, settings);
  const auto& roots = out.lookup.roots;
  out.verdicts = parallel_map<StabilityVerdict>(roots.size(), [&](std::size_t i) {
    return classify_at_lambda(curve, roots[i].lambda, settings, spectrum);
  });
  if (!out.lookup.note.empty()) out.notes.push_back(out.lookup.note);
  for (const auto& v : out.verdicts) {
    if (v.gap_warning) {
      std::ostringstream os;
      os.precision(17);
      os << "nondegeneracy gap " << v.nondeg_gap << " below tolerance at lambda = "
         << v.lambda;
      out.notes.push_back(os.str());
    }
  }
  if (curve.problem.regime() == Regime::Supercritical && out.verdicts.size() == 2 &&
      !(out.verdicts[0].verdict == Stability::Stable &&
        out.verdicts[1].verdict == Stability::Unstable)) {
    out.notes.push_back("verdict pattern differs from (stable, unstable)");
  }
  out.notes.push_back("nondegeneracy checked on radial perturbations only");
  return out;
}

}  // namespace nlsmass
