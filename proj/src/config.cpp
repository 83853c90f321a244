#include "nlsmass/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlsmass/error.hpp"

namespace nlsmass {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_keys()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"dimension", "3", "space dimension N >= 2"},
      {"exponent", "3", "power p, decimal or fraction such as 10/3"},
      {"radius", "1", "ball radius R"},
      {"weight.family", "constant", "constant | inverse_power"},
      {"weight.k", "0", "k in (1 + r^k)^(-s)"},
      {"weight.s", "0", "s in (1 + r^k)^(-s)"},
      {"weight.amplitude", "1", "d(0)"},
      {"perturbation.family", "none", "none | power"},
      {"perturbation.coeff", "0", "c in g = c |u|^(q-2) u"},
      {"perturbation.exponent", "0", "q in g = c |u|^(q-2) u"},
      {"label", "", "free text"},
      {"lambda", "", "solve: multiplier"},
      {"lambda.min", "", "trace: lower end (default -lambda_1 + 1e-3)"},
      {"lambda.max", "", "trace: upper end (default 1e3 (1 + lambda_1))"},
      {"mass.target", "", "lookup/stability: prescribed squared L2 norm"},
      {"mass.fraction", "", "lookup/stability: target as a fraction of the traced max"},
      {"trace.initial", "64", "initial samples (>= 16)"},
      {"trace.refinements", "64", "refinement budget"},
      {"trace.jump", "0.05", "relative mass jump that triggers refinement"},
      {"ode.rtol", "1e-12", "integrator relative tolerance"},
      {"ode.atol", "1e-14", "integrator absolute tolerance (amplitude units)"},
      {"ode.extended", "false", "long double stepper: true | false"},
      {"lookup.rtol", "1e-8", "mass lookup tolerance"},
      {"limits.slope_tolerance", "0.05", "relative tolerance on the tail slope"},
      {"limits.critical_tolerance", "0.03", "relative tolerance on the critical mass"},
      {"yanagida.mode", "check", "check | region"},
      {"yanagida.divisor", "p", "p | p-1 | p+1"},
      {"yanagida.r_points", "400", "radial grid size (>= 100)"},
      {"yanagida.m_points", "40", "samples of m in (0, N-2]"},
      {"region.p", "", "region: list of p"},
      {"region.ks", "", "region: list of k*s"},
      {"region.s", "2", "region: s used to split k*s"},
      {"region.divisors", "p", "region: list of divisors"},
      {"stability.points", "4000", "linearization grid size"},
      {"stability.gap_tolerance", "1e-3", "nondegeneracy warning threshold"},
  };
  return keys;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  auto one = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (...) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::Config, what + ": not a number: '" + text + "'");
    }
    return v;
  };
  const auto slash = t.find('/');
  if (slash == std::string::npos) return one(t);
  const double num = one(trim(t.substr(0, slash)));
  const double den = one(trim(t.substr(slash + 1)));
  if (den == 0.0) throw Error(ErrorKind::Config, what + ": zero denominator");
  return num / den;
}

Config::Config() {
  for (const auto& k : config_keys()) {
    if (*k.fallback) values_[k.name] = k.fallback;
  }
}

Config Config::parse(std::istream& is, const std::string& source) {
  Config cfg;
  std::map<std::string, int> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::Config, where + ": empty key");
    if (seen.count(key)) {
      throw Error(ErrorKind::Config, where + ": key '" + key + "' repeated (first on line " +
                                         std::to_string(seen[key]) + ")");
    }
    seen[key] = lineno;
    try {
      cfg.set(key, value);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, where + ": " + e.what());
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + path + "'");
  return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  values_[key] = trim(value);
}

bool Config::has(const std::string& key) const {
  auto it = values_.find(key);
  return it != values_.end() && !it->second.empty();
}

const std::string& Config::text(const std::string& key) const {
  static const std::string empty;
  if (!find_key(key)) throw Error(ErrorKind::Config, "unknown key '" + key + "'");
  auto it = values_.find(key);
  return it == values_.end() ? empty : it->second;
}

double Config::number(const std::string& key) const {
  if (!has(key)) throw Error(ErrorKind::Config, "missing value for '" + key + "'");
  return parse_number(text(key), key);
}

std::optional<double> Config::maybe_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorKind::Config, key + ": expected an integer");
  }
  return static_cast<int>(v);
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split_list(text(key))) out.push_back(parse_number(w, key));
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const {
  return split_list(text(key));
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) {
    if (has(k.name)) out.emplace_back(k.name, text(k.name));
  }
  return out;
}

RadialProblem Config::problem() const {
  Weight w;
  const auto& wf = text("weight.family");
  const double amp = number("weight.amplitude");
  if (wf == "constant") {
    w = Weight::constant(amp);
  } else if (wf == "inverse_power") {
    w = Weight::inverse_power(number("weight.k"), number("weight.s"), amp);
  } else {
    throw Error(ErrorKind::Config, "weight.family must be constant or inverse_power");
  }
  Perturbation g;
  const auto& pf = text("perturbation.family");
  if (pf == "none") {
    g = Perturbation::none();
  } else if (pf == "power") {
    g = Perturbation::power(number("perturbation.coeff"), number("perturbation.exponent"));
  } else {
    throw Error(ErrorKind::Config, "perturbation.family must be none or power");
  }
  try {
    return RadialProblem(integer("dimension"), number("exponent"), number("radius"), w, g,
                         text("label"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Validation) throw;
    throw Error(ErrorKind::Config, e.what());
  }
}

ShootingSettings Config::shooting() const {
  ShootingSettings s;
  s.ode.rtol = number("ode.rtol");
  s.ode.atol = number("ode.atol");
  if (!(s.ode.rtol > 0.0) || !(s.ode.atol > 0.0)) {
    throw Error(ErrorKind::Config, "tolerances must be positive");
  }
  const auto& ext = text("ode.extended");
  if (ext != "true" && ext != "false") {
    throw Error(ErrorKind::Config, "ode.extended must be true or false");
  }
  s.ode.extended = ext == "true";
  if (s.ode.extended) s.match_tol = std::min(s.match_tol, 1e-17);
  return s;
}

CurveBudget Config::budget() const {
  CurveBudget b;
  b.initial = integer("trace.initial");
  b.refinements = integer("trace.refinements");
  b.jump_threshold = number("trace.jump");
  return b;
}

}  // namespace nlsmass
