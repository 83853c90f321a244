#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlsmass/report.hpp"

namespace nlsmass {

enum class Regime { Subcritical, MassCritical, Supercritical };

std::string_view to_string(Regime r);

// Critical Sobolev exponent 2N/(N-2); +infinity for N = 2.
double sobolev_exponent(int dimension);

// Exact comparison of p against the mass-critical exponent 2 + 4/N.
Regime classify_regime(int dimension, double exponent);

double mass_critical_exponent(int dimension);

// sign(u) |u|^q computed through exp/log, with 0 -> 0.
double signed_power(double u, double q);
// |u|^q through exp/log, with 0 -> 0 for q > 0.
double abs_power(double u, double q);

enum class WeightFamily { Constant, InversePower, Custom };

// Radial weight d(r) multiplying the leading power.
struct Weight {
  WeightFamily family = WeightFamily::Constant;
  double amplitude = 1.0;  // d(0) for the built-in families
  double k = 0.0;
  double s = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static Weight constant(double amplitude = 1.0);
  // amplitude * (1 + r^k)^(-s)
  static Weight inverse_power(double k, double s, double amplitude = 1.0);
  static Weight custom(std::function<double(double)> value,
                       std::function<double(double)> derivative);

  // Same weight multiplied by `factor`.
  Weight scaled(double factor) const;
};

enum class PerturbationFamily { None, Power, Custom };

// Lower-order perturbation g(r,u) with its u-derivative and optional
// primitive G(r,u) = int_0^u g(r,s) ds. Without a primitive, G is
// integrated numerically.
struct Perturbation {
  PerturbationFamily family = PerturbationFamily::None;
  double coeff = 0.0;
  double exponent = 0.0;
  std::function<double(double, double)> value;
  std::function<double(double, double)> du;
  std::function<double(double, double)> primitive;

  static Perturbation none();
  // coeff * |u|^(q-2) u
  static Perturbation power(double coeff, double q);
  static Perturbation custom(std::function<double(double, double)> value,
                             std::function<double(double, double)> du,
                             std::function<double(double, double)> primitive = {});

  bool is_zero() const { return family == PerturbationFamily::None; }
};

// -Delta u + lambda u = d(|x|)|u|^{p-2}u + g(|x|,u) on the ball B_R.
// Immutable once constructed.
class RadialProblem {
 public:
  RadialProblem(int dimension, double exponent, double radius,
                Weight weight = Weight::constant(),
                Perturbation perturbation = Perturbation::none(),
                std::string label = {});

  static RadialProblem pure_power(int dimension, double exponent,
                                  double radius = 1.0);

  int dimension() const { return dimension_; }
  double exponent() const { return exponent_; }
  double radius() const { return radius_; }
  const Weight& weight() const { return weight_; }
  const Perturbation& perturbation() const { return perturbation_; }
  const std::string& label() const { return label_; }
  Regime regime() const { return regime_; }

  // True when f(r,u) = d(0)|u|^{p-2}u exactly (constant weight, no g).
  bool is_pure_power() const;
  double weight_at_origin() const { return weight_.value(0.0); }

  // f(r,u) = d(r) sign(u)|u|^{p-1} + g(r,u)
  double f(double r, double u) const;
  double f_u(double r, double u) const;
  // f in extended precision; built-in families are evaluated in long double,
  // custom callbacks in double.
  long double f_ext(long double r, long double u) const;
  // F(r,u) = d(r)|u|^p / p + G(r,u)
  double F(double r, double u) const;

  // Same problem on a ball of a different radius.
  RadialProblem with_radius(double radius) const;
  // Same nonlinearity with d replaced by `factor * d`.
  RadialProblem with_weight_scaled(double factor) const;

 private:
  int dimension_;
  double exponent_;
  double radius_;
  Weight weight_;
  Perturbation perturbation_;
  std::string label_;
  Regime regime_;
};

// Sampling points for the advisory hypothesis checks.
struct ProbeGrid {
  std::vector<double> radii;     // r values in [0, R]
  std::vector<double> amplitudes;  // u values > 0 for the sandwich check
  double small_u = 1e-6;
  double large_u = 1e6;
  double alpha = 0.0;  // 0 -> use p
  double beta = 0.0;   // 0 -> use p
  double limit_tolerance = 1e-2;

  // `n` radii uniformly spread on [0, R] and a geometric amplitude ladder.
  static ProbeGrid uniform(double radius, int n = 65);
};

// Report-only check of the standing hypotheses on sampled points.
ConditionReport validate_problem(const RadialProblem& problem,
                                 const ProbeGrid& probes);

}  // namespace nlsmass
