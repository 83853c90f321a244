#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlsmass/error.hpp"
#include "nlsmass/ground_state.hpp"

namespace nlsmass {

struct CurveSample {
  double lambda = 0.0;
  double mass = 0.0;  // squared L^2 norm
  double height = 0.0;
  double energy = 0.0;
  ShootingMethod method = ShootingMethod::Bisection;
};

struct RefinementEvent {
  double lambda_left = 0.0;
  double lambda_right = 0.0;
  double lambda_inserted = 0.0;
  double relative_jump = 0.0;
  std::string reason;
};

struct CurveBudget {
  int initial = 64;
  int refinements = 64;
  double jump_threshold = 0.05;
};

// Sampled lambda -> ||u_lambda||^2 along the positive branch.
struct MassCurve {
  RadialProblem problem;
  double lambda1 = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<CurveSample> samples;
  std::vector<RefinementEvent> refinement_log;

  std::size_t size() const { return samples.size(); }
  // Nearest traced sample, for warm starts.
  const CurveSample& nearest(double lambda) const;
  // Largest |m_{i+1} - m_i| / max(m_i, m_{i+1}).
  double max_relative_jump() const;
};

// Solve failure during a trace, with the samples obtained so far.
class TraceError : public Error {
 public:
  TraceError(ErrorKind kind, const std::string& what, MassCurve partial)
      : Error(kind, what), partial_(std::move(partial)) {}
  const MassCurve& partial() const { return partial_; }

 private:
  MassCurve partial_;
};

// Initial lambda grid: geometric in lambda + lambda_1 on (lambda_min, 0],
// uniform on [0, 4 lambda_1], geometric in lambda beyond.
std::vector<double> initial_lambda_grid(double lambda1, double lambda_min,
                                        double lambda_max, int count);

MassCurve trace_mass_curve(const RadialProblem& problem, double lambda_min,
                           double lambda_max, const CurveBudget& budget = {},
                           const ShootingSettings& settings = {});

struct CurveExtrema {
  double b = 0.0;            // max mass over the traced range
  double lambda_star = 0.0;  // argmax
  bool interior = false;     // interior maximum (true) or boundary supremum
  std::string boundary_side;  // "left" / "right" when !interior
  double mass_at_min = 0.0;   // mass at the first sample
  double mass_at_max = 0.0;   // mass at the last sample
  std::string trend_at_max;   // "increasing" / "decreasing" / "flat"
  int evaluations = 0;
};

// Maximum of the curve; an interior sample maximum is refined by
// golden-section search on `mass_at` to `lambda_rtol` relative in lambda.
CurveExtrema curve_extrema(const MassCurve& curve,
                           const std::function<double(double)>& mass_at,
                           double lambda_rtol = 1e-6);

// Same, with fresh ground-state solves.
CurveExtrema curve_extrema(const MassCurve& curve, const ShootingSettings& settings = {});

struct LookupRoot {
  double lambda = 0.0;
  GroundState state;
  bool near_boundary = false;
};

struct LookupResult {
  double target = 0.0;
  std::vector<LookupRoot> roots;
  bool boundary_warning = false;
  std::string note;
};

// Every lambda on the traced range with ||u_lambda||^2 = c, refined with
// fresh solves to |m - c| < mass_rtol * c.
LookupResult mass_lookup(const MassCurve& curve, double c,
                         const ShootingSettings& settings = {},
                         double mass_rtol = 1e-8);

}  // namespace nlsmass
