#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nlsmass/problem.hpp"
#include "nlsmass/report.hpp"

namespace nlsmass {

// Weight h(r) of  -Delta u + lambda u = h(r) u^{p-1}  on B_R.
struct WeightSpec {
  Weight h = Weight::constant();
  double radius = 1.0;

  static WeightSpec constant(double value = 1.0, double radius = 1.0);
  // (1 + r^k)^{-s}
  static WeightSpec inverse_power(double k, double s, double radius = 1.0);
};

// What "/(p)" in H(r;m) stands for.
enum class Divisor { P, PMinus1, PPlus1 };

std::string_view to_string(Divisor d);
Divisor parse_divisor(std::string_view text);
double divisor_value(Divisor d, double p);

// H(r;m) = 2 r^{m+2} h'(r)/q - {2N - 4 - m - 2(m+2)/q} r^{m+1} h(r),
// q the selected divisor. Domain error unless 0 <= m <= N-2.
double H_function(const WeightSpec& w, double p, int dimension, double m,
                  double r, Divisor divisor = Divisor::P);

struct YanagidaSettings {
  int r_points = 400;  // interior grid r_i = R i / r_points
  int m_points = 40;   // m_j = (N-2) j / m_points, j >= 1
  Divisor divisor = Divisor::P;
  double zero_tolerance = 1e-12;  // relative to max(1, |H|_inf)
};

struct YanagidaReport {
  ConditionReport report;  // checks C1, C2, C3, C4
  Verdict overall = Verdict::Indeterminate;
  int r_points = 0;
  int m_points = 0;
  Divisor divisor = Divisor::P;
};

YanagidaReport check_conditions(const WeightSpec& w, double p, int dimension,
                                const YanagidaSettings& settings = {});

// Parameter region of the inverse-power family in which uniqueness is
// asserted; only N = 2 and N = 3 are covered.
bool in_paper_region(int dimension, double p, double k, double s);
// Lambda ranges attached to the region statements (metadata only).
std::vector<std::string> lambda_restrictions(int dimension);

struct RegionRow {
  double p = 0.0;
  double k = 0.0;
  double s = 0.0;
  Divisor divisor = Divisor::P;
  bool in_region_paper = false;
  Verdict c1 = Verdict::Indeterminate;
  Verdict c2 = Verdict::Indeterminate;
  Verdict c3 = Verdict::Indeterminate;
  Verdict overall = Verdict::Indeterminate;

  // In the region but not passing, or passing outside it.
  bool discrepancy() const;
};

struct RegionGrid {
  std::vector<double> p;
  std::vector<double> k;
  std::vector<double> s;
  // When nonempty, replaces the k x s product.
  std::vector<std::pair<double, double>> ks_pairs;
  std::vector<Divisor> divisors{Divisor::P};
};

struct RegionTable {
  int dimension = 0;
  std::vector<RegionRow> rows;
  std::vector<std::string> lambda_restrictions;

  std::vector<RegionRow> discrepancies() const;
  void write_csv(std::ostream& os) const;
};

// Sweeps p x k x s x divisor; row order is that nesting, independent of
// thread count.
RegionTable region_table(int dimension, const RegionGrid& grid,
                         const YanagidaSettings& settings = {});

}  // namespace nlsmass
