#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "nlsmass/error.hpp"
#include "nlsmass/yanagida.hpp"
#include "oracles.hpp"

using namespace nlsmass;

TEST_CASE("H agrees with the hand-expanded inverse-power formula") {
  for (Divisor d : {Divisor::P, Divisor::PMinus1, Divisor::PPlus1}) {
    for (double p : {2.5, 3.0, 3.7}) {
      for (auto [k, s] : {std::pair{2.0, 0.5}, std::pair{1.0, 1.0}, std::pair{3.0, 0.1}}) {
        const auto w = WeightSpec::inverse_power(k, s);
        const double q = divisor_value(d, p);
        for (double m : {0.0, 0.3, 1.0}) {
          for (double r : {0.05, 0.4, 0.9, 1.0}) {
            const double a = H_function(w, p, 3, m, r, d);
            const double b = oracle::inverse_power_H(k, s, q, 3, m, r);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
          }
        }
      }
    }
  }
}

TEST_CASE("H is linear in the weight") {
  const auto w = WeightSpec::inverse_power(2.0, 0.7);
  WeightSpec w3 = w;
  w3.h = w.h.scaled(4.0);  // power of two: exact
  const auto c = WeightSpec::constant(1.0);
  WeightSpec sum = w;
  sum.h = Weight::custom([&](double r) { return w.h.value(r) + c.h.value(r); },
                         [&](double r) { return w.h.derivative(r) + c.h.derivative(r); });
  for (double r : {0.1, 0.5, 1.0}) {
    const double a = H_function(w, 3.0, 3, 0.5, r);
    CHECK(H_function(w3, 3.0, 3, 0.5, r) == 4.0 * a);
    CHECK(H_function(sum, 3.0, 3, 0.5, r) ==
          doctest::Approx(a + H_function(c, 3.0, 3, 0.5, r)).epsilon(1e-15));
  }
}

TEST_CASE("H for m outside [0, N-2] is a domain error") {
  const auto w = WeightSpec::constant();
  try {
    H_function(w, 3.0, 3, 1.5, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(H_function(w, 3.0, 3, -0.1, 0.5), Error);
  CHECK_NOTHROW(H_function(w, 3.0, 2, 0.0, 0.5));
}

TEST_CASE("constant weight in three dimensions passes for 2 < p <= 4") {
  for (double p : {2.2, 2.5, 3.0, 3.5, 4.0}) {
    CAPTURE(p);
    const auto rep = check_conditions(WeightSpec::constant(), p, 3);
    CHECK(rep.overall == Verdict::Pass);
    CHECK(rep.report.find("C4")->verdict == Verdict::Pass);
  }
}

TEST_CASE("conditions fail with witnesses when H changes sign the wrong way") {
  // h = e^{5r}: H(r;0) = r h (10 r / p - 2 + 4 / p) > 0 for r > 0.2 at p = 3
  WeightSpec w;
  w.h = Weight::custom([](double r) { return std::exp(5 * r); },
                       [](double r) { return 5 * std::exp(5 * r); });
  const auto rep = check_conditions(w, 3.0, 3);
  CHECK(rep.overall == Verdict::Fail);
  const auto* c2 = rep.report.find("C2");
  REQUIRE(c2 != nullptr);
  CHECK(c2->verdict == Verdict::Fail);
  CHECK_FALSE(c2->witnesses.empty());
}

TEST_CASE("non-positive weight fails C1") {
  WeightSpec w;
  w.h = Weight::custom([](double r) { return 0.5 - r; }, [](double) { return -1.0; });
  const auto rep = check_conditions(w, 3.0, 3);
  CHECK(rep.report.find("C1")->verdict == Verdict::Fail);
  CHECK(rep.overall == Verdict::Fail);
}

TEST_CASE("divisor names round-trip") {
  for (Divisor d : {Divisor::P, Divisor::PMinus1, Divisor::PPlus1}) {
    CHECK(parse_divisor(to_string(d)) == d);
  }
  CHECK(divisor_value(Divisor::PMinus1, 3.0) == 2.0);
  CHECK_THROWS_AS(parse_divisor("p+2"), Error);
}

TEST_CASE("paper region membership") {
  CHECK(in_paper_region(3, 3.0, 0.0, 2.0));
  CHECK(in_paper_region(3, 3.0, 0.5, 2.0));   // ks = 1 = 4 - p
  CHECK_FALSE(in_paper_region(3, 3.0, 0.6, 2.0));
  CHECK_FALSE(in_paper_region(3, 4.5, 0.0, 2.0));
  CHECK(in_paper_region(2, 4.0, 0.5, 2.0));   // 2ks = 2 = 6 - p
  CHECK_FALSE(in_paper_region(2, 4.0, 0.6, 2.0));
  CHECK(lambda_restrictions(3).size() >= 1);
}

TEST_CASE("region table: nesting order, determinism, in-region rows pass") {
  RegionGrid g;
  g.p = {2.5, 3.0, 3.5};
  g.ks_pairs = {{0.0, 2.0}, {0.25, 2.0}, {0.5, 2.0}};
  g.divisors = {Divisor::P, Divisor::PPlus1};
  const auto t = region_table(3, g);
  REQUIRE(t.rows.size() == 3 * 3 * 2);
  CHECK(t.rows[0].p == 2.5);
  CHECK(t.rows[1].divisor == Divisor::PPlus1);
  CHECK(t.rows.back().p == 3.5);
  for (const auto& row : t.rows) {
    if (row.in_region_paper && row.divisor == Divisor::P) CHECK(row.overall == Verdict::Pass);
  }
  std::ostringstream a, b;
  t.write_csv(a);
  region_table(3, g).write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("p,k,s,divisor,in_region_paper,c1,c2,c3,overall\n", 0) == 0);
  CHECK_THROWS_AS(region_table(4, g), Error);
}
