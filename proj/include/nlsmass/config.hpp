#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nlsmass/ground_state.hpp"
#include "nlsmass/mass_curve.hpp"
#include "nlsmass/problem.hpp"

namespace nlsmass {

struct ConfigKey {
  const char* name;
  const char* fallback;  // empty: unset unless given
  const char* help;
};

// Every accepted key, in the order used when the config is written back.
const std::vector<ConfigKey>& config_keys();

// `key = value` lines, `#` comments, blank lines ignored. Unknown or repeated
// keys and malformed lines are Config errors.
class Config {
 public:
  Config();

  static Config parse(std::istream& is, const std::string& source = "<config>");
  static Config load(const std::string& path);

  // Overrides one key (e.g. from the command line); same validation.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  // Decimal or a fraction such as 10/3.
  double number(const std::string& key) const;
  std::optional<double> maybe_number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  // Key -> value text for every key with a value, in registry order.
  std::vector<std::pair<std::string, std::string>> resolved() const;

  RadialProblem problem() const;
  ShootingSettings shooting() const;
  CurveBudget budget() const;

 private:
  std::map<std::string, std::string> values_;
};

// Decimal or p/q; throws Config naming `what` on failure.
double parse_number(const std::string& text, const std::string& what);

}  // namespace nlsmass
