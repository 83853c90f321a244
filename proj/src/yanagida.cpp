#include "nlsmass/yanagida.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "nlsmass/error.hpp"
#include "nlsmass/parallel.hpp"

namespace nlsmass {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Verdict combine(std::initializer_list<Verdict> vs) {
  bool indet = false;
  for (Verdict v : vs) {
    if (v == Verdict::Fail) return Verdict::Fail;
    if (v == Verdict::Indeterminate) indet = true;
  }
  return indet ? Verdict::Indeterminate : Verdict::Pass;
}

// Signs of H(.;m) on the grid with the relative zero band.
std::vector<int> sign_pattern(const std::vector<double>& h, double zero_tol) {
  double hmax = 0.0;
  for (double x : h) hmax = std::max(hmax, std::abs(x));
  const double tol = zero_tol * std::max(1.0, hmax);
  std::vector<int> s(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    s[i] = h[i] > tol ? 1 : (h[i] < -tol ? -1 : 0);
  }
  return s;
}

}  // namespace

WeightSpec WeightSpec::constant(double value, double radius) {
  return {Weight::constant(value), radius};
}

WeightSpec WeightSpec::inverse_power(double k, double s, double radius) {
  return {Weight::inverse_power(k, s), radius};
}

std::string_view to_string(Divisor d) {
  switch (d) {
    case Divisor::P: return "p";
    case Divisor::PMinus1: return "p-1";
    case Divisor::PPlus1: return "p+1";
  }
  return "p";
}

Divisor parse_divisor(std::string_view text) {
  if (text == "p") return Divisor::P;
  if (text == "p-1") return Divisor::PMinus1;
  if (text == "p+1") return Divisor::PPlus1;
  throw Error(ErrorKind::Config,
              "divisor must be one of p, p-1, p+1 (got '" + std::string(text) + "')");
}

double divisor_value(Divisor d, double p) {
  switch (d) {
    case Divisor::P: return p;
    case Divisor::PMinus1: return p - 1.0;
    case Divisor::PPlus1: return p + 1.0;
  }
  return p;
}

double H_function(const WeightSpec& w, double p, int dimension, double m,
                  double r, Divisor divisor) {
  const double n = dimension;
  if (!(m >= 0.0) || !(m <= n - 2.0)) {
    throw Error(ErrorKind::Domain, "H(r;m) needs 0 <= m <= N-2 (got m = " +
                                       fmt(m) + ", N = " +
                                       std::to_string(dimension) + ")");
  }
  const double q = divisor_value(divisor, p);
  const double rm1 = std::pow(r, m + 1.0);
  return 2.0 * r * rm1 * w.h.derivative(r) / q -
         (2.0 * n - 4.0 - m - 2.0 * (m + 2.0) / q) * rm1 * w.h.value(r);
}

YanagidaReport check_conditions(const WeightSpec& w, double p, int dimension,
                                const YanagidaSettings& settings) {
  if (settings.r_points < 100) {
    throw Error(ErrorKind::Validation, "yanagida grid needs at least 100 points");
  }
  if (settings.m_points < 1) {
    throw Error(ErrorKind::Validation, "yanagida m grid needs at least 1 point");
  }
  const double R = w.radius;
  const int n = settings.r_points;
  std::vector<double> r(n - 1);
  for (int i = 1; i < n; ++i) r[i - 1] = R * i / n;

  YanagidaReport out;
  out.r_points = n;
  out.m_points = dimension > 2 ? settings.m_points : 0;
  out.divisor = settings.divisor;
  auto& rep = out.report;

  // C1: h >= 0, h > 0 somewhere.
  {
    ConditionCheck c;
    c.name = "C1";
    bool positive = false;
    for (double x : r) {
      const double h = w.h.value(x);
      if (h < 0.0) c.witnesses.push_back(x);
      if (h > 0.0) positive = true;
    }
    if (!c.witnesses.empty()) {
      c.verdict = Verdict::Fail;
      c.detail = "h < 0 at witness radii";
    } else if (!positive) {
      c.verdict = Verdict::Fail;
      c.detail = "h vanishes on the whole grid";
    } else {
      c.verdict = Verdict::Pass;
    }
    rep.checks.push_back(std::move(c));
  }

  // C2: H(r;0) <= 0.
  {
    ConditionCheck c;
    c.name = "C2";
    std::vector<double> h(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      h[i] = H_function(w, p, dimension, 0.0, r[i], settings.divisor);
    }
    const auto s = sign_pattern(h, settings.zero_tolerance);
    bool nonzero = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != 0) nonzero = true;
      if (s[i] > 0 &&
          H_function(w, p, dimension, 0.0, r[i], settings.divisor) > 0.0) {
        c.witnesses.push_back(r[i]);
      }
    }
    if (!c.witnesses.empty()) {
      c.verdict = Verdict::Fail;
      c.detail = "H(r;0) > 0 at witness radii";
      c.value = *std::max_element(h.begin(), h.end());
    } else if (!nonzero) {
      c.verdict = Verdict::Indeterminate;
      c.detail = "H(r;0) vanishes to tolerance on the whole grid";
    } else {
      c.verdict = Verdict::Pass;
    }
    rep.checks.push_back(std::move(c));
  }

  // C3: for each m in (0, N-2], H(.;m) is + then -.
  {
    ConditionCheck c;
    c.name = "C3";
    if (dimension <= 2) {
      c.verdict = Verdict::Pass;
      c.detail = "vacuous: (0, N-2] is empty";
    } else {
      // H(.;m) == 0 satisfies the condition for that m; only a grid on
      // which every m vanishes is indeterminate.
      int vanishing = 0;
      double beta_min = R, beta_max = 0.0;
      std::vector<double> h(r.size());
      for (int j = 1; j <= settings.m_points; ++j) {
        const double m = (dimension - 2.0) * j / settings.m_points;
        for (std::size_t i = 0; i < r.size(); ++i) {
          h[i] = H_function(w, p, dimension, m, r[i], settings.divisor);
        }
        const auto s = sign_pattern(h, settings.zero_tolerance);
        if (std::all_of(s.begin(), s.end(), [](int v) { return v == 0; })) {
          ++vanishing;
          continue;
        }
        // First negative, then any positive after it breaks the pattern.
        std::size_t first_neg = s.size();
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s[i] < 0) { first_neg = i; break; }
        }
        bool broken = false;
        for (std::size_t i = first_neg; i < s.size(); ++i) {
          if (s[i] > 0) {
            // witness triple (m, r-, r+)
            c.witnesses.insert(c.witnesses.end(), {m, r[first_neg], r[i]});
            broken = true;
            break;
          }
        }
        if (!broken) {
          const double beta =
              first_neg == s.size() ? R : (first_neg == 0 ? 0.0 : r[first_neg - 1]);
          beta_min = std::min(beta_min, beta);
          beta_max = std::max(beta_max, beta);
        }
      }
      if (!c.witnesses.empty()) {
        c.verdict = Verdict::Fail;
        c.detail = "sign change - to + at witness triples (m, r-, r+)";
      } else if (vanishing == settings.m_points) {
        c.verdict = Verdict::Indeterminate;
        c.detail = "H(.;m) vanishes to tolerance for every m";
      } else {
        c.verdict = Verdict::Pass;
        c.detail = "beta(m) in [" + fmt(beta_min) + ", " + fmt(beta_max) + "]";
        if (vanishing > 0) {
          c.detail += "; H(.;m) identically zero for " + std::to_string(vanishing) + " m";
        }
        c.value = beta_min;
        c.expected = beta_max;
      }
    }
    rep.checks.push_back(std::move(c));
  }

  // C4: h(0) > 0 and bounded.
  {
    ConditionCheck c;
    c.name = "C4";
    const double h0 = w.h.value(0.0);
    double hmax = h0;
    bool finite = std::isfinite(h0);
    for (double x : r) {
      const double h = w.h.value(x);
      finite = finite && std::isfinite(h);
      hmax = std::max(hmax, h);
    }
    c.value = h0;
    c.expected = hmax;
    if (!finite) {
      c.verdict = Verdict::Fail;
      c.detail = "h not finite on the grid";
    } else if (!(h0 > 0.0)) {
      c.verdict = Verdict::Fail;
      c.detail = "h(0) <= 0";
      c.witnesses.push_back(0.0);
    } else {
      c.verdict = Verdict::Pass;
      c.detail = "sup h on grid = " + fmt(hmax);
    }
    rep.checks.push_back(std::move(c));
  }

  out.overall = combine({rep.checks[0].verdict, rep.checks[1].verdict,
                         rep.checks[2].verdict});
  rep.notes.push_back("divisor in H(r;m): " + std::string(to_string(settings.divisor)));
  if (out.overall != Verdict::Pass) {
    rep.notes.push_back(
        "the conditions are sufficient for uniqueness, not necessary; a "
        "failure does not imply multiple positive solutions");
  }
  return out;
}

bool in_paper_region(int dimension, double p, double k, double s) {
  const double ks = k * s;
  const double slack = 1e-12;
  if (dimension == 3) return p > 2.0 && p <= 4.0 && ks <= 4.0 - p + slack;
  if (dimension == 2) return p > 2.0 && p <= 6.0 && 2.0 * ks <= 6.0 - p + slack;
  return false;
}

std::vector<std::string> lambda_restrictions(int dimension) {
  std::vector<std::string> out;
  if (dimension == 3) {
    out.push_back("N=3, 2<p<=4, ks<=4-p: uniqueness stated for -lambda_1 < lambda < 0");
  } else if (dimension == 2) {
    out.push_back("N=2, 2<p<=6, 2ks<=6-p: uniqueness stated for -lambda_1 < lambda < 0");
  }
  out.push_back("any N >= 2: uniqueness stated for lambda >= 0 without a region constraint");
  out.push_back("conditions C1-C3 are checked independently of lambda");
  return out;
}

bool RegionRow::discrepancy() const {
  return in_region_paper != (overall == Verdict::Pass);
}

std::vector<RegionRow> RegionTable::discrepancies() const {
  std::vector<RegionRow> out;
  for (const auto& row : rows) {
    if (row.discrepancy()) out.push_back(row);
  }
  return out;
}

void RegionTable::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "p,k,s,divisor,in_region_paper,c1,c2,c3,overall\n";
  for (const auto& row : rows) {
    os << row.p << ',' << row.k << ',' << row.s << ',' << to_string(row.divisor)
       << ',' << (row.in_region_paper ? "true" : "false") << ','
       << to_string(row.c1) << ',' << to_string(row.c2) << ','
       << to_string(row.c3) << ',' << to_string(row.overall) << '\n';
  }
  os.precision(old);
}

RegionTable region_table(int dimension, const RegionGrid& grid,
                         const YanagidaSettings& settings) {
  if (dimension != 2 && dimension != 3) {
    throw Error(ErrorKind::Validation, "region table covers N = 2 and N = 3 only");
  }
  std::vector<std::pair<double, double>> ks = grid.ks_pairs;
  if (ks.empty()) {
    for (double k : grid.k)
      for (double s : grid.s) ks.emplace_back(k, s);
  }
  std::vector<RegionRow> rows;
  for (double p : grid.p)
    for (auto [k, s] : ks)
      for (Divisor d : grid.divisors) {
        RegionRow row;
        row.p = p;
        row.k = k;
        row.s = s;
        row.divisor = d;
        row.in_region_paper = in_paper_region(dimension, p, k, s);
        rows.push_back(row);
      }

  parallel_for(rows.size(), [&](std::size_t i) {
    auto& row = rows[i];
    YanagidaSettings ys = settings;
    ys.divisor = row.divisor;
    const auto rep = check_conditions(WeightSpec::inverse_power(row.k, row.s),
                                      row.p, dimension, ys);
    row.c1 = rep.report.checks[0].verdict;
    row.c2 = rep.report.checks[1].verdict;
    row.c3 = rep.report.checks[2].verdict;
    row.overall = rep.overall;
  });

  RegionTable table;
  table.dimension = dimension;
  table.rows = std::move(rows);
  table.lambda_restrictions = lambda_restrictions(dimension);
  return table;
}

}  // namespace nlsmass
