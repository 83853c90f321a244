#include "nlsmass/mass_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "nlsmass/parallel.hpp"

namespace nlsmass {

const CurveSample& MassCurve::nearest(double lambda) const {
  if (samples.empty()) throw Error(ErrorKind::Validation, "mass curve is empty");
  auto it = std::lower_bound(samples.begin(), samples.end(), lambda,
                             [](const CurveSample& s, double l) { return s.lambda < l; });
  if (it == samples.end()) return samples.back();
  if (it == samples.begin()) return *it;
  auto prev = std::prev(it);
  return (lambda - prev->lambda) <= (it->lambda - lambda) ? *prev : *it;
}

double MassCurve::max_relative_jump() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = samples[i - 1].mass, b = samples[i].mass;
    worst = std::max(worst, std::abs(b - a) / std::max(a, b));
  }
  return worst;
}

namespace {

void append_geometric(std::vector<double>& out, double lo, double hi, int n, double shift) {
  // Geometric in (lambda + shift).
  const double a = std::log(lo + shift), b = std::log(hi + shift);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(i == 0 ? lo : (i == n - 1 ? hi : std::exp(a + t * (b - a)) - shift));
  }
}

void append_uniform(std::vector<double>& out, double lo, double hi, int n) {
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(lo + t * (hi - lo));
  }
}

CurveSample sample_from(const GroundState& gs) {
  return {gs.lambda, gs.mass, gs.height, gs.energy, gs.method};
}

// Midpoint in the coordinate the grid uses around lambda.
double grid_midpoint(double a, double b, double lambda1) {
  if (b <= 0.0) return std::sqrt((a + lambda1) * (b + lambda1)) - lambda1;
  if (a >= 4.0 * lambda1 && a > 0.0) return std::sqrt(a * b);
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> initial_lambda_grid(double lambda1, double lambda_min,
                                        double lambda_max, int count) {
  if (!(lambda_min < lambda_max)) {
    throw Error(ErrorKind::Validation, "lambda range must satisfy lambda_min < lambda_max");
  }
  const double upper_uniform = 4.0 * lambda1;
  struct Seg {
    double lo, hi;
    int kind;  // 0 geometric near -lambda_1, 1 uniform, 2 geometric in lambda
  };
  std::vector<Seg> segs;
  if (lambda_min < 0.0) segs.push_back({lambda_min, std::min(0.0, lambda_max), 0});
  if (lambda_max > 0.0) {
    const double lo = std::max(lambda_min, 0.0);
    const double hi = std::min(lambda_max, upper_uniform);
    if (hi > lo) segs.push_back({lo, hi, 1});
    if (lambda_max > upper_uniform) {
      segs.push_back({std::max(lambda_min, upper_uniform), lambda_max, 2});
    }
  }
  std::vector<double> grid;
  const int per = std::max(2, (count + static_cast<int>(segs.size()) - 1) /
                                  static_cast<int>(segs.size()));
  int left = count + static_cast<int>(segs.size()) - 1;  // shared endpoints
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const int n = k + 1 == segs.size() ? std::max(2, left) : std::min(per, left);
    left -= n;
    const auto& s = segs[k];
    if (s.kind == 0) {
      append_geometric(grid, s.lo, s.hi, n, lambda1);
    } else if (s.kind == 1) {
      append_uniform(grid, s.lo, s.hi, n);
    } else {
      append_geometric(grid, s.lo, s.hi, n, 0.0);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) {
                           return std::abs(x - y) <= 1e-9 * (1.0 + std::abs(x));
                         }),
             grid.end());
  return grid;
}

MassCurve trace_mass_curve(const RadialProblem& problem, double lambda_min,
                           double lambda_max, const CurveBudget& budget,
                           const ShootingSettings& settings) {
  if (budget.initial < 16) {
    throw Error(ErrorKind::Validation, "mass curve budget must be at least 16 samples");
  }
  const double lambda1 = first_dirichlet_eigenvalue(problem.dimension(), problem.radius());
  if (!(lambda_min > -lambda1)) {
    throw Error(ErrorKind::BelowFirstEigenvalue,
                "lambda_min must lie above -lambda_1");
  }
  MassCurve curve{problem, lambda1, lambda_min, lambda_max, {}, {}};
  const auto grid = initial_lambda_grid(lambda1, lambda_min, lambda_max, budget.initial);

  // Cold-started initial solves are independent; merge by lambda order.
  std::vector<std::optional<GroundState>> solved(grid.size());
  try {
    parallel_for(grid.size(), [&](std::size_t i) {
      solved[i] = shoot_ground_state(problem, grid[i], lambda1, settings, std::nullopt);
    });
  } catch (const Error& e) {
    for (const auto& s : solved) {
      if (s) curve.samples.push_back(sample_from(*s));
    }
    throw TraceError(e.kind(), std::string("mass curve trace aborted: ") + e.what(), curve);
  }
  for (const auto& s : solved) curve.samples.push_back(sample_from(*s));

  for (int pass = 0; pass < budget.refinements; ++pass) {
    std::size_t worst = 0;
    double worst_jump = 0.0;
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
      const double a = curve.samples[i - 1].mass, b = curve.samples[i].mass;
      const double jump = std::abs(b - a) / std::max(a, b);
      if (jump > worst_jump) {
        worst_jump = jump;
        worst = i;
      }
    }
    if (worst_jump <= budget.jump_threshold) break;
    const CurveSample& l = curve.samples[worst - 1];
    const CurveSample& r = curve.samples[worst];
    const double mid = grid_midpoint(l.lambda, r.lambda, lambda1);
    if (!(mid > l.lambda && mid < r.lambda)) break;
    const WarmStart warm{std::sqrt(l.height * r.height), r.method};
    RefinementEvent ev{l.lambda, r.lambda, mid, worst_jump, "relative mass jump above threshold"};
    try {
      const auto gs = shoot_ground_state(problem, mid, lambda1, settings, warm);
      curve.samples.insert(curve.samples.begin() + static_cast<std::ptrdiff_t>(worst),
                           sample_from(gs));
      curve.refinement_log.push_back(ev);
    } catch (const Error& e) {
      throw TraceError(e.kind(), std::string("mass curve refinement aborted: ") + e.what(),
                       curve);
    }
  }
  return curve;
}

// --------------------------------------------------------------- extrema

CurveExtrema curve_extrema(const MassCurve& curve,
                           const std::function<double(double)>& mass_at,
                           double lambda_rtol) {
  const auto& s = curve.samples;
  if (s.size() < 3) throw Error(ErrorKind::Validation, "curve_extrema needs >= 3 samples");
  CurveExtrema ex;
  ex.mass_at_min = s.front().mass;
  ex.mass_at_max = s.back().mass;
  {
    const double a = s[s.size() - 2].mass, b = s.back().mass;
    const double rel = (b - a) / std::max(a, b);
    ex.trend_at_max = rel > 1e-9 ? "increasing" : (rel < -1e-9 ? "decreasing" : "flat");
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].mass > s[imax].mass) imax = i;
  }
  ex.b = s[imax].mass;
  ex.lambda_star = s[imax].lambda;
  if (imax == 0 || imax + 1 == s.size()) {
    ex.interior = false;
    ex.boundary_side = imax == 0 ? "left" : "right";
    return ex;
  }
  ex.interior = true;
  // Golden-section maximisation on the bracketing samples.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = s[imax - 1].lambda, b = s[imax + 1].lambda;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = mass_at(x1), f2 = mass_at(x2);
  ex.evaluations = 2;
  double best_x = ex.lambda_star, best_f = ex.b;
  auto keep = [&](double x, double f) {
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
  };
  keep(x1, f1);
  keep(x2, f2);
  for (int it = 0; it < 200 && (b - a) > lambda_rtol * std::max(1.0, std::abs(0.5 * (a + b)));
       ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = mass_at(x1);
      keep(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = mass_at(x2);
      keep(x2, f2);
    }
    ++ex.evaluations;
  }
  ex.b = best_f;
  ex.lambda_star = best_x;
  return ex;
}

CurveExtrema curve_extrema(const MassCurve& curve, const ShootingSettings& settings) {
  auto mass_at = [&](double lambda) {
    const auto& near = curve.nearest(lambda);
    return shoot_ground_state(curve.problem, lambda, curve.lambda1, settings,
                              WarmStart{near.height, near.method})
        .mass;
  };
  return curve_extrema(curve, mass_at);
}

// ---------------------------------------------------------------- lookup

namespace {

struct Converged {
  double lambda;
};

}  // namespace

LookupResult mass_lookup(const MassCurve& curve, double c,
                         const ShootingSettings& settings, double mass_rtol) {
  if (!(c > 0.0)) throw Error(ErrorKind::Validation, "target mass must be positive");
  const auto& s = curve.samples;
  LookupResult res;
  res.target = c;
  if (s.size() < 2) throw Error(ErrorKind::Validation, "mass curve has too few samples");

  auto solve = [&](double lambda) {
    const auto& near = curve.nearest(lambda);
    return shoot_ground_state(curve.problem, lambda, curve.lambda1, settings,
                              WarmStart{near.height, near.method});
  };

  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double g0 = s[i].mass - c, g1 = s[i + 1].mass - c;
    const bool exact_left = g0 == 0.0 && i == 0;
    if (!(g0 * g1 < 0.0 || g1 == 0.0 || exact_left)) continue;
    double root;
    if (g1 == 0.0) {
      root = s[i + 1].lambda;
    } else if (exact_left) {
      root = s[i].lambda;
    } else {
      auto fn = [&](double lambda) {
        const double g = solve(lambda).mass - c;
        if (std::abs(g) < mass_rtol * c) throw Converged{lambda};
        return g;
      };
      auto tol = [](double x, double y) {
        return std::abs(x - y) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(x), std::abs(y));
      };
      std::uintmax_t iters = 100;
      try {
        const auto br = boost::math::tools::toms748_solve(fn, s[i].lambda, s[i + 1].lambda,
                                                          g0, g1, tol, iters);
        root = 0.5 * (br.first + br.second);
      } catch (const Converged& done) {
        root = done.lambda;
      }
    }
    LookupRoot lr;
    lr.lambda = root;
    lr.state = solve(root);
    lr.near_boundary = (i == 0) || (i + 2 == s.size());
    if (std::abs(lr.state.mass - c) > mass_rtol * c) {
      std::ostringstream os;
      os.precision(17);
      os << "mass lookup did not reach tolerance at lambda = " << root
         << " (mass " << lr.state.mass << ", target " << c << ")";
      throw Error(ErrorKind::Numeric, os.str());
    }
    res.boundary_warning = res.boundary_warning || lr.near_boundary;
    res.roots.push_back(std::move(lr));
  }
  std::sort(res.roots.begin(), res.roots.end(),
            [](const LookupRoot& a, const LookupRoot& b) { return a.lambda < b.lambda; });
  double top = 0.0;
  for (const auto& x : s) top = std::max(top, x.mass);
  if (res.roots.empty()) {
    res.note = c > top ? "nonexistence: target mass exceeds the traced maximum"
                       : "no root on the traced range";
  } else if (res.boundary_warning) {
    res.note = "root within one grid cell of the traced boundary; roots beyond the range "
               "may be missed";
  }
  return res;
}

}  // namespace nlsmass
