#include "nlsmass/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlsmass/error.hpp"

namespace nlsmass {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_dimension(int dimension) {
  if (dimension < 2) {
    throw Error(ErrorKind::Validation,
                "dimension must satisfy N >= 2 (got " +
                    std::to_string(dimension) + ")");
  }
}

void require_exponent(int dimension, double exponent) {
  const double crit = sobolev_exponent(dimension);
  if (!(exponent > 2.0)) {
    throw Error(ErrorKind::Validation,
                "exponent must satisfy p > 2 (got " + fmt_double(exponent) + ")");
  }
  if (!(exponent < crit)) {
    throw Error(ErrorKind::Validation,
                "exponent must satisfy p < 2* = " + fmt_double(crit) +
                    " (got " + fmt_double(exponent) + ")");
  }
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::MassCritical: return "mass_critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

bool ConditionReport::all_pass() const {
  for (const auto& c : checks) {
    if (c.verdict != Verdict::Pass) return false;
  }
  return true;
}

bool ConditionReport::any_fail() const {
  for (const auto& c : checks) {
    if (c.verdict == Verdict::Fail) return true;
  }
  return false;
}

const ConditionCheck* ConditionReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double sobolev_exponent(int dimension) {
  require_dimension(dimension);
  if (dimension == 2) return std::numeric_limits<double>::infinity();
  return 2.0 * dimension / (dimension - 2.0);
}

double mass_critical_exponent(int dimension) {
  require_dimension(dimension);
  return 2.0 + 4.0 / dimension;
}

Regime classify_regime(int dimension, double exponent) {
  require_dimension(dimension);
  require_exponent(dimension, exponent);
  const double crit = mass_critical_exponent(dimension);
  if (exponent > crit) return Regime::Supercritical;
  if (exponent == crit) return Regime::MassCritical;
  return Regime::Subcritical;
}

double signed_power(double u, double q) {
  if (u == 0.0) return 0.0;
  const double m = std::exp(q * std::log(std::abs(u)));
  return u > 0.0 ? m : -m;
}

double abs_power(double u, double q) {
  if (u == 0.0) return 0.0;
  return std::exp(q * std::log(std::abs(u)));
}

// ---------------------------------------------------------------- Weight

Weight Weight::constant(double amplitude) {
  Weight w;
  w.family = WeightFamily::Constant;
  w.amplitude = amplitude;
  w.value = [amplitude](double) { return amplitude; };
  w.derivative = [](double) { return 0.0; };
  return w;
}

Weight Weight::inverse_power(double k, double s, double amplitude) {
  if (!(k >= 0.0) || !(s > 0.0)) {
    throw Error(ErrorKind::Validation,
                "inverse-power weight requires k >= 0 and s > 0");
  }
  Weight w;
  w.family = WeightFamily::InversePower;
  w.amplitude = amplitude;
  w.k = k;
  w.s = s;
  w.value = [k, s, amplitude](double r) {
    const double rk = k == 0.0 ? 1.0 : abs_power(r, k);
    return amplitude * std::exp(-s * std::log1p(rk));
  };
  w.derivative = [k, s, amplitude](double r) {
    if (k == 0.0) return 0.0;
    if (r == 0.0) {
      // d'(0) = -s k r^{k-1} at r = 0: finite only for k >= 1.
      if (k > 1.0) return 0.0;
      if (k == 1.0) return -amplitude * s;
      return -std::numeric_limits<double>::infinity();
    }
    const double rk = abs_power(r, k);
    return -amplitude * s * k * abs_power(r, k - 1.0) *
           std::exp(-(s + 1.0) * std::log1p(rk));
  };
  return w;
}

Weight Weight::custom(std::function<double(double)> value,
                      std::function<double(double)> derivative) {
  Weight w;
  w.family = WeightFamily::Custom;
  w.amplitude = value(0.0);
  w.value = std::move(value);
  w.derivative = std::move(derivative);
  return w;
}

Weight Weight::scaled(double factor) const {
  Weight w = *this;
  w.amplitude = amplitude * factor;
  auto v = value;
  auto d = derivative;
  w.value = [v, factor](double r) { return factor * v(r); };
  w.derivative = [d, factor](double r) { return factor * d(r); };
  return w;
}

// ---------------------------------------------------------- Perturbation

Perturbation Perturbation::none() {
  Perturbation g;
  g.value = [](double, double) { return 0.0; };
  g.du = [](double, double) { return 0.0; };
  g.primitive = [](double, double) { return 0.0; };
  return g;
}

Perturbation Perturbation::power(double coeff, double q) {
  if (!(q > 1.0)) {
    throw Error(ErrorKind::Validation, "power perturbation requires q > 1");
  }
  Perturbation g;
  g.family = PerturbationFamily::Power;
  g.coeff = coeff;
  g.exponent = q;
  g.value = [coeff, q](double, double u) { return coeff * signed_power(u, q - 1.0); };
  g.du = [coeff, q](double, double u) {
    return coeff * (q - 1.0) * abs_power(u, q - 2.0);
  };
  g.primitive = [coeff, q](double, double u) { return coeff * abs_power(u, q) / q; };
  return g;
}

Perturbation Perturbation::custom(std::function<double(double, double)> value,
                                  std::function<double(double, double)> du,
                                  std::function<double(double, double)> primitive) {
  Perturbation g;
  g.family = PerturbationFamily::Custom;
  g.value = std::move(value);
  g.du = std::move(du);
  g.primitive = std::move(primitive);
  return g;
}

// --------------------------------------------------------- RadialProblem

RadialProblem::RadialProblem(int dimension, double exponent, double radius,
                             Weight weight, Perturbation perturbation,
                             std::string label)
    : dimension_(dimension),
      exponent_(exponent),
      radius_(radius),
      weight_(std::move(weight)),
      perturbation_(std::move(perturbation)),
      label_(std::move(label)),
      regime_(classify_regime(dimension, exponent)) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::Validation, "radius must be positive and finite");
  }
  if (!weight_.value || !weight_.derivative) {
    throw Error(ErrorKind::Validation, "weight callbacks must be set");
  }
  if (!perturbation_.value || !perturbation_.du) {
    throw Error(ErrorKind::Validation, "perturbation callbacks must be set");
  }
}

RadialProblem RadialProblem::pure_power(int dimension, double exponent,
                                        double radius) {
  return RadialProblem(dimension, exponent, radius, Weight::constant(1.0),
                       Perturbation::none(), "pure-power");
}

bool RadialProblem::is_pure_power() const {
  return weight_.family == WeightFamily::Constant && perturbation_.is_zero();
}

double RadialProblem::f(double r, double u) const {
  return weight_.value(r) * signed_power(u, exponent_ - 1.0) +
         perturbation_.value(r, u);
}

long double RadialProblem::f_ext(long double r, long double u) const {
  auto spow = [](long double x, long double q) -> long double {
    if (x == 0.0L) return 0.0L;
    const long double m = std::exp(q * std::log(std::fabs(x)));
    return x < 0.0L ? -m : m;
  };
  long double d;
  switch (weight_.family) {
    case WeightFamily::Constant:
      d = weight_.amplitude;
      break;
    case WeightFamily::InversePower: {
      const long double k = weight_.k;
      const long double rk =
          k == 0.0L ? 1.0L : (r == 0.0L ? 0.0L : std::exp(k * std::log(r)));
      d = weight_.amplitude * std::exp(-static_cast<long double>(weight_.s) * std::log1p(rk));
      break;
    }
    default:
      d = weight_.value(static_cast<double>(r));
  }
  long double g = 0.0L;
  switch (perturbation_.family) {
    case PerturbationFamily::None:
      break;
    case PerturbationFamily::Power:
      g = perturbation_.coeff * spow(u, perturbation_.exponent - 1.0L);
      break;
    default:
      g = perturbation_.value(static_cast<double>(r), static_cast<double>(u));
  }
  return d * spow(u, exponent_ - 1.0L) + g;
}

double RadialProblem::f_u(double r, double u) const {
  return weight_.value(r) * (exponent_ - 1.0) * abs_power(u, exponent_ - 2.0) +
         perturbation_.du(r, u);
}

double RadialProblem::F(double r, double u) const {
  const double lead = weight_.value(r) * abs_power(u, exponent_) / exponent_;
  if (perturbation_.is_zero()) return lead;
  if (perturbation_.primitive) return lead + perturbation_.primitive(r, u);
  // 8-point Gauss-Legendre on [0, u].
  static constexpr double x[8] = {-0.9602898564975363, -0.7966664774136267,
                                  -0.5255324099163290, -0.1834346424956498,
                                  0.1834346424956498,  0.5255324099163290,
                                  0.7966664774136267,  0.9602898564975363};
  static constexpr double w[8] = {0.1012285362903763, 0.2223810344533745,
                                  0.3137066458778873, 0.3626837833783620,
                                  0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += w[i] * perturbation_.value(r, 0.5 * u * (x[i] + 1.0));
  }
  return lead + 0.5 * u * acc;
}

RadialProblem RadialProblem::with_radius(double radius) const {
  return RadialProblem(dimension_, exponent_, radius, weight_, perturbation_,
                       label_);
}

RadialProblem RadialProblem::with_weight_scaled(double factor) const {
  return RadialProblem(dimension_, exponent_, radius_, weight_.scaled(factor),
                       perturbation_, label_);
}

// ------------------------------------------------------------ validation

ProbeGrid ProbeGrid::uniform(double radius, int n) {
  ProbeGrid g;
  for (int i = 0; i < n; ++i) g.radii.push_back(radius * i / (n - 1));
  for (double u = 1e-4; u <= 1e4 * 1.0000001; u *= 10.0) g.amplitudes.push_back(u);
  return g;
}

namespace {

double checked(double v, const char* what, double r, double u) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::Evaluation, std::string(what) +
                                           " is not finite at r = " + fmt_double(r) +
                                           ", u = " + fmt_double(u));
  }
  return v;
}

}  // namespace

ConditionReport validate_problem(const RadialProblem& problem,
                                 const ProbeGrid& probes) {
  if (probes.radii.empty()) {
    throw Error(ErrorKind::Validation, "probe grid must contain radii");
  }
  const double p = problem.exponent();
  const auto& d = problem.weight();
  const auto& g = problem.perturbation();
  ConditionReport report;

  std::vector<double> dv;
  dv.reserve(probes.radii.size());
  for (double r : probes.radii) dv.push_back(checked(d.value(r), "weight", r, 0.0));

  {
    ConditionCheck c{"weight.nonnegative", Verdict::Pass, {}, "d(r) >= 0 on probes"};
    for (std::size_t i = 0; i < dv.size(); ++i) {
      if (dv[i] < 0.0) {
        c.verdict = Verdict::Fail;
        c.witnesses.push_back(probes.radii[i]);
      }
    }
    report.checks.push_back(c);
  }
  {
    const double d0 = checked(d.value(0.0), "weight", 0.0, 0.0);
    ConditionCheck c{"weight.origin_positive", d0 > 0.0 ? Verdict::Pass : Verdict::Fail,
                     {}, "d(0) > 0"};
    c.value = d0;
    if (d0 <= 0.0) c.witnesses.push_back(0.0);
    report.checks.push_back(c);
  }
  {
    ConditionCheck c{"weight.nonincreasing", Verdict::Pass, {},
                     "d nonincreasing on sorted probes"};
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < dv.size(); ++i) pts.emplace_back(probes.radii[i], dv[i]);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double slack = 1e-14 * std::max(1.0, std::abs(pts[i - 1].second));
      if (pts[i].second > pts[i - 1].second + slack) {
        c.verdict = Verdict::Fail;
        c.witnesses.push_back(pts[i].first);
      }
    }
    report.checks.push_back(c);
  }
  {
    ConditionCheck c{"perturbation.large_u", Verdict::Pass, {},
                     "|g(r,U)| / U^{p-1} small at the large probe"};
    const double U = probes.large_u;
    double worst = 0.0;
    for (double r : probes.radii) {
      const double ratio =
          std::abs(checked(g.value(r, U), "perturbation", r, U)) / abs_power(U, p - 1.0);
      worst = std::max(worst, ratio);
      if (ratio > probes.limit_tolerance) {
        c.verdict = Verdict::Fail;
        c.witnesses.push_back(r);
      }
    }
    c.value = worst;
    report.checks.push_back(c);
  }
  {
    ConditionCheck c{"perturbation.small_u", Verdict::Pass, {},
                     "|g(r,u)| / u small at the small probe"};
    const double u = probes.small_u;
    double worst = 0.0;
    for (double r : probes.radii) {
      const double ratio = std::abs(checked(g.value(r, u), "perturbation", r, u)) / u;
      worst = std::max(worst, ratio);
      if (ratio > probes.limit_tolerance) {
        c.verdict = Verdict::Fail;
        c.witnesses.push_back(r);
      }
    }
    c.value = worst;
    report.checks.push_back(c);
  }
  {
    const double alpha = probes.alpha > 0.0 ? probes.alpha : p;
    const double beta = probes.beta > 0.0 ? probes.beta : p;
    ConditionCheck c{"sandwich", Verdict::Pass, {},
                     "0 < (alpha-1) f u <= f_u u^2 <= (beta-1) f u"};
    c.value = alpha;
    c.expected = beta;
    const double crit = sobolev_exponent(problem.dimension());
    if (!(2.0 < alpha && alpha <= beta && beta < crit)) {
      c.verdict = Verdict::Fail;
      c.detail += "; alpha/beta outside 2 < alpha <= beta < 2*";
    }
    for (double r : probes.radii) {
      for (double a : probes.amplitudes) {
        for (double u : {a, -a}) {
          const double fu = checked(problem.f(r, u), "f", r, u) * u;
          const double fuu = checked(problem.f_u(r, u), "f_u", r, u) * u * u;
          const double slack = 1e-12 * std::abs(fuu);
          const bool ok = (alpha - 1.0) * fu > 0.0 &&
                          (alpha - 1.0) * fu <= fuu + slack &&
                          fuu <= (beta - 1.0) * fu + slack;
          if (!ok) {
            c.verdict = Verdict::Fail;
            c.witnesses.push_back(r);
          }
        }
      }
    }
    report.checks.push_back(c);
  }
  return report;
}

}  // namespace nlsmass
