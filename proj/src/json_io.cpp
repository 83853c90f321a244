#include "nlsmass/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace nlsmass {

namespace {

void emit(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * depth + 2, ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(out, it.value(), depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        emit(out, v, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) { out += "null"; return; }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      // Keep it a JSON float when %g printed an integer.
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

Json checks_json(const ConditionReport& r) {
  Json arr = Json::array();
  for (const auto& c : r.checks) {
    Json o;
    o["name"] = c.name;
    o["verdict"] = std::string(to_string(c.verdict));
    o["value"] = c.value;
    o["expected"] = c.expected;
    o["witnesses"] = c.witnesses;
    o["detail"] = c.detail;
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  os << text;
  if (!os) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, dump_json(j));
}

Json to_json(const Config& cfg) {
  Json o = Json::object();
  for (const auto& [k, v] : cfg.resolved()) o[k] = v;
  return o;
}

Json to_json(const ConditionReport& r) {
  Json o;
  o["all_pass"] = r.all_pass();
  o["checks"] = checks_json(r);
  o["notes"] = r.notes;
  return o;
}

Json to_json(const GroundState& gs) {
  Json o;
  o["lambda"] = gs.lambda;
  o["a0"] = gs.height;
  o["mass"] = gs.mass;
  o["energy"] = gs.energy;
  o["residual"] = gs.nehari_residual;
  o["relative_residual"] = gs.relative_residual();
  o["gradient_norm_sq"] = gs.gradient_norm_sq;
  o["method"] = std::string(to_string(gs.method));
  o["samples"] = gs.profile.size();
  return o;
}

Json to_json(const QProfile& q) {
  Json o;
  o["dimension"] = q.dimension;
  o["exponent"] = q.exponent;
  o["q_height"] = q.height;
  o["q_mass"] = q.mass;
  o["q_mass_uncertainty"] = q.mass_uncertainty;
  o["r_cut"] = q.r_cut;
  o["tail_coeff"] = q.tail_coeff;
  o["tail_mass"] = q.tail_mass;
  return o;
}

Json to_json(const MassCurve& curve) {
  Json o;
  o["lambda1"] = curve.lambda1;
  o["lambda_min"] = curve.lambda_min;
  o["lambda_max"] = curve.lambda_max;
  o["samples"] = curve.samples.size();
  o["max_relative_jump"] = curve.max_relative_jump();
  Json log = Json::array();
  for (const auto& e : curve.refinement_log) {
    Json x;
    x["lambda_left"] = e.lambda_left;
    x["lambda_right"] = e.lambda_right;
    x["lambda_inserted"] = e.lambda_inserted;
    x["relative_jump"] = e.relative_jump;
    x["reason"] = e.reason;
    log.push_back(std::move(x));
  }
  o["refinement_log"] = std::move(log);
  return o;
}

Json to_json(const CurveExtrema& e) {
  Json o;
  o["b"] = e.b;
  o["lambda_star"] = e.lambda_star;
  o["interior"] = e.interior;
  o["boundary_side"] = e.boundary_side;
  o["mass_at_lambda_min"] = e.mass_at_min;
  o["mass_at_lambda_max"] = e.mass_at_max;
  o["trend_at_lambda_max"] = e.trend_at_max;
  return o;
}

Json to_json(const LookupResult& r) {
  Json o;
  o["target"] = r.target;
  Json roots = Json::array();
  for (const auto& x : r.roots) {
    Json g = to_json(x.state);
    g["near_boundary"] = x.near_boundary;
    roots.push_back(std::move(g));
  }
  o["roots"] = std::move(roots);
  o["boundary_warning"] = r.boundary_warning;
  o["note"] = r.note;
  return o;
}

Json to_json(const LimitsReport& r) {
  Json o;
  o["regime"] = std::string(to_string(r.regime));
  o["slope_fit"] = r.slope_fit;
  o["slope_stderr"] = r.slope_stderr;
  o["slope_predicted"] = r.slope_predicted;
  o["intercept_fit"] = r.intercept_fit;
  o["prefactor_ratio"] = r.prefactor_ratio;
  o["q_mass"] = r.q_mass;
  o["tail_mass"] = r.tail_mass;
  o["lambda_fit_min"] = r.lambda_fit_min;
  o["lambda_fit_max"] = r.lambda_fit_max;
  o["fit_samples"] = r.fit_samples;
  o["verdicts"] = checks_json(r.report);
  o["notes"] = r.report.notes;
  return o;
}

Json to_json(const YanagidaReport& r) {
  Json o;
  o["overall"] = std::string(to_string(r.overall));
  o["divisor"] = std::string(to_string(r.divisor));
  o["r_points"] = r.r_points;
  o["m_points"] = r.m_points;
  o["conditions"] = checks_json(r.report);
  o["notes"] = r.report.notes;
  return o;
}

Json to_json(const RegionTable& t) {
  Json o;
  o["dimension"] = t.dimension;
  o["rows"] = t.rows.size();
  Json d = Json::array();
  for (const auto& row : t.discrepancies()) {
    Json x;
    x["p"] = row.p;
    x["k"] = row.k;
    x["s"] = row.s;
    x["divisor"] = std::string(to_string(row.divisor));
    x["in_region_paper"] = row.in_region_paper;
    x["c1"] = std::string(to_string(row.c1));
    x["c2"] = std::string(to_string(row.c2));
    x["c3"] = std::string(to_string(row.c3));
    x["overall"] = std::string(to_string(row.overall));
    d.push_back(std::move(x));
  }
  o["discrepancies"] = std::move(d);
  o["lambda_restrictions"] = t.lambda_restrictions;
  return o;
}

Json to_json(const StabilityVerdict& v) {
  Json o;
  o["lambda"] = v.lambda;
  o["mass"] = v.mass;
  o["slope"] = v.slope;
  o["slope_err"] = v.slope_err;
  o["verdict"] = std::string(to_string(v.verdict));
  o["nondeg_gap"] = v.nondeg_gap;
  o["negative_eigenvalues"] = v.negative_eigenvalues;
  o["gap_warning"] = v.gap_warning;
  return o;
}

Json to_json(const Error& e) {
  Json o;
  o["error"] = std::string(to_string(e.kind()));
  o["message"] = e.what();
  o["exit_code"] = exit_code(e.kind());
  if (auto* amb = dynamic_cast<const AmbiguityError*>(&e)) {
    Json br = Json::array();
    for (auto [lo, hi] : amb->brackets()) br.push_back(Json::array({lo, hi}));
    o["brackets"] = std::move(br);
  }
  return o;
}

void write_curve_csv(std::ostream& os, const MassCurve& curve) {
  const auto old = os.precision(17);
  os << "lambda,mass,a0,energy\n";
  for (const auto& s : curve.samples) {
    os << s.lambda << ',' << s.mass << ',' << s.height << ',' << s.energy << '\n';
  }
  os.precision(old);
}

std::string curve_plot_script(const std::string& csv_name, const std::string& title,
                              double b, double lambda_star) {
  std::ostringstream os;
  os.precision(17);
  os << "set datafile separator ','\n"
     << "set title '" << title << "'\n"
     << "set xlabel 'lambda'\nset ylabel '||u||^2'\nset key top right\n";
  if (b > 0.0) {
    os << "set arrow from " << lambda_star << ", graph 0 to " << lambda_star
       << ", graph 1 nohead dt 2\n";
  }
  os << "plot '" << csv_name << "' using 1:2 skip 1 with linespoints title 'm(lambda)'\n";
  return os.str();
}

std::string profile_plot_script(const std::string& csv_name, const std::string& title) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set title '" << title << "'\n"
     << "set xlabel 'r'\nset ylabel 'u'\n"
     << "plot '" << csv_name << "' using 1:2 skip 2 with lines title 'u', \\\n"
     << "     '' using 1:3 skip 2 with lines title \"u'\"\n";
  return os.str();
}

}  // namespace nlsmass
