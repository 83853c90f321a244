#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nlsmass {

enum class Verdict { Pass, Fail, Indeterminate };

std::string_view to_string(Verdict v);

// One named check with its verdict and the points that witness it.
struct ConditionCheck {
  std::string name;
  Verdict verdict = Verdict::Indeterminate;
  std::vector<double> witnesses;
  std::string detail;
  // Optional scalar associated with the check (fitted slope, ratio, ...).
  double value = 0.0;
  double expected = 0.0;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  std::vector<std::string> notes;

  bool all_pass() const;
  bool any_fail() const;
  const ConditionCheck* find(std::string_view name) const;
};

}  // namespace nlsmass
