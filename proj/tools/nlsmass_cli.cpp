// nlsmass: command line front end.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nlsmass/asymptotics.hpp"
#include "nlsmass/config.hpp"
#include "nlsmass/json_io.hpp"
#include "nlsmass/stability.hpp"
#include "nlsmass/yanagida.hpp"

namespace fs = std::filesystem;
using namespace nlsmass;

namespace {

constexpr int kCheckFailed = 4;

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
};

Config load(const Common& c) {
  Config cfg = Config::load(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, "--set expects key=value (got '" + kv + "')");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::string path_in(const Common& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

void prepare_out(const Common& c) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec || !fs::is_directory(c.out_dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory '" + c.out_dir + "'");
  }
}

Json envelope(const std::string& command, const Config& cfg) {
  Json o;
  o["command"] = command;
  o["config"] = to_json(cfg);
  return o;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

MassCurve trace(const Config& cfg, const RadialProblem& prob, const ShootingSettings& sh) {
  const double l1 = first_dirichlet_eigenvalue(prob.dimension(), prob.radius());
  const double lmin = cfg.maybe_number("lambda.min").value_or(-l1 + 1e-3);
  const double lmax = cfg.maybe_number("lambda.max").value_or(1e3 * (1.0 + l1));
  return trace_mass_curve(prob, lmin, lmax, cfg.budget(), sh);
}

void write_curve(const Common& c, const MassCurve& curve, const CurveExtrema* ex,
                 const std::string& title) {
  std::ofstream csv(path_in(c, "curve.csv"), std::ios::binary);
  if (!csv) throw Error(ErrorKind::Io, "cannot write curve.csv");
  write_curve_csv(csv, curve);
  write_text_file(path_in(c, "curve.gp"),
                  curve_plot_script("curve.csv", title, ex ? ex->b : 0.0,
                                    ex ? ex->lambda_star : 0.0));
}

double target_mass(const Config& cfg, const CurveExtrema& ex) {
  if (cfg.has("mass.target")) return cfg.number("mass.target");
  if (cfg.has("mass.fraction")) return cfg.number("mass.fraction") * ex.b;
  throw Error(ErrorKind::Config, "set mass.target or mass.fraction");
}

int cmd_solve(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  const auto prob = cfg.problem();
  if (!cfg.has("lambda")) throw Error(ErrorKind::Config, "solve needs 'lambda'");
  const auto gs = shoot_ground_state(prob, cfg.number("lambda"), cfg.shooting());
  std::ofstream csv(path_in(c, "groundstate.csv"), std::ios::binary);
  if (!csv) throw Error(ErrorKind::Io, "cannot write groundstate.csv");
  write_profile_csv(csv, gs.profile, gs.lambda, gs.height);
  write_text_file(path_in(c, "groundstate.gp"),
                  profile_plot_script("groundstate.csv", "ground state"));
  Json o = envelope("solve", cfg);
  o["result"] = to_json(gs);
  write_json_file(path_in(c, "groundstate.json"), o);
  std::cout << "lambda=" << fmt(gs.lambda) << " a0=" << fmt(gs.height)
            << " mass=" << fmt(gs.mass) << " energy=" << fmt(gs.energy)
            << " residual=" << fmt(gs.relative_residual()) << "\n";
  return 0;
}

int cmd_trace(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  const auto prob = cfg.problem();
  const auto sh = cfg.shooting();
  const auto curve = trace(cfg, prob, sh);
  const auto ex = curve_extrema(curve, sh);
  write_curve(c, curve, &ex, "mass curve");
  Json o = envelope("trace", cfg);
  o["regime"] = std::string(to_string(prob.regime()));
  o["curve"] = to_json(curve);
  o["extrema"] = to_json(ex);
  write_json_file(path_in(c, "curve.json"), o);
  std::cout << "samples=" << curve.size() << " b=" << fmt(ex.b)
            << " lambda_star=" << fmt(ex.lambda_star)
            << (ex.interior ? " interior" : " boundary:" + ex.boundary_side) << "\n";
  return 0;
}

int cmd_lookup(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  const auto prob = cfg.problem();
  const auto sh = cfg.shooting();
  const auto curve = trace(cfg, prob, sh);
  const auto ex = curve_extrema(curve, sh);
  const double target = target_mass(cfg, ex);
  const auto res = mass_lookup(curve, target, sh, cfg.number("lookup.rtol"));
  write_curve(c, curve, &ex, "mass curve");
  Json o = envelope("lookup", cfg);
  o["extrema"] = to_json(ex);
  o["lookup"] = to_json(res);
  write_json_file(path_in(c, "lookup.json"), o);
  std::cout << "target=" << fmt(target) << " roots=" << res.roots.size();
  for (const auto& r : res.roots) std::cout << " " << fmt(r.lambda);
  if (!res.note.empty()) std::cout << " (" << res.note << ")";
  std::cout << "\n";
  return 0;
}

int cmd_qnorm(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  WholeSpaceSettings ws;
  ws.shooting = cfg.shooting();
  const auto q = solve_whole_space_Q(cfg.integer("dimension"), cfg.number("exponent"), ws);
  std::ofstream csv(path_in(c, "q.csv"), std::ios::binary);
  if (!csv) throw Error(ErrorKind::Io, "cannot write q.csv");
  write_profile_csv(csv, q.profile, 1.0, q.height);
  write_text_file(path_in(c, "q.gp"), profile_plot_script("q.csv", "whole-space soliton Q"));
  Json o = envelope("qnorm", cfg);
  o["result"] = to_json(q);
  write_json_file(path_in(c, "qnorm.json"), o);
  std::cout << "q_mass=" << fmt(q.mass) << " +- " << fmt(q.mass_uncertainty)
            << " Q(0)=" << fmt(q.height) << "\n";
  return 0;
}

int cmd_limits(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  const auto prob = cfg.problem();
  const auto sh = cfg.shooting();
  const auto curve = trace(cfg, prob, sh);
  WholeSpaceSettings ws;
  ws.shooting = sh;
  const auto q = solve_whole_space_Q(prob.dimension(), prob.exponent(), ws);
  const auto rep = verify_limits(prob, curve, q, cfg.number("limits.slope_tolerance"),
                                 cfg.number("limits.critical_tolerance"));
  write_curve(c, curve, nullptr, "mass curve");
  Json o = envelope("limits", cfg);
  o["report"] = to_json(rep);
  write_json_file(path_in(c, "limits.json"), o);
  std::cout << "regime=" << to_string(rep.regime) << " slope_fit=" << fmt(rep.slope_fit)
            << " slope_predicted=" << fmt(rep.slope_predicted)
            << " q_mass=" << fmt(rep.q_mass)
            << (rep.report.any_fail() ? " FAIL" : " ok") << "\n";
  return rep.report.any_fail() ? kCheckFailed : 0;
}

int cmd_yanagida(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  YanagidaSettings ys;
  ys.divisor = parse_divisor(cfg.text("yanagida.divisor"));
  ys.r_points = cfg.integer("yanagida.r_points");
  ys.m_points = cfg.integer("yanagida.m_points");
  const int N = cfg.integer("dimension");
  const auto& mode = cfg.text("yanagida.mode");
  if (mode == "check") {
    const auto prob = cfg.problem();
    if (!prob.perturbation().is_zero()) {
      throw Error(ErrorKind::Config, "the uniqueness conditions need g = 0");
    }
    const WeightSpec w{prob.weight(), prob.radius()};
    const auto rep = check_conditions(w, prob.exponent(), N, ys);
    Json o = envelope("yanagida", cfg);
    o["result"] = to_json(rep);
    o["lambda_restrictions"] = lambda_restrictions(N);
    write_json_file(path_in(c, "yanagida.json"), o);
    std::cout << "overall=" << to_string(rep.overall);
    for (const auto& ch : rep.report.checks)
      std::cout << " " << ch.name << "=" << to_string(ch.verdict);
    std::cout << "\n";
    return rep.overall == Verdict::Fail ? kCheckFailed : 0;
  }
  if (mode != "region") throw Error(ErrorKind::Config, "yanagida.mode must be check or region");
  RegionGrid grid;
  grid.p = cfg.numbers("region.p");
  const double s = cfg.number("region.s");
  if (!(s > 0.0)) throw Error(ErrorKind::Config, "region.s must be positive");
  for (double ks : cfg.numbers("region.ks")) grid.ks_pairs.emplace_back(ks / s, s);
  grid.divisors.clear();
  for (const auto& d : cfg.words("region.divisors")) grid.divisors.push_back(parse_divisor(d));
  if (grid.p.empty() || grid.ks_pairs.empty() || grid.divisors.empty()) {
    throw Error(ErrorKind::Config, "region mode needs region.p, region.ks and region.divisors");
  }
  const auto table = region_table(N, grid, ys);
  std::ofstream csv(path_in(c, "region.csv"), std::ios::binary);
  if (!csv) throw Error(ErrorKind::Io, "cannot write region.csv");
  table.write_csv(csv);
  Json o = envelope("yanagida", cfg);
  o["result"] = to_json(table);
  write_json_file(path_in(c, "region.json"), o);
  std::cout << "rows=" << table.rows.size()
            << " discrepancies=" << table.discrepancies().size() << "\n";
  // Region comparisons are report-only.
  return 0;
}

int cmd_stability(const Common& c) {
  const Config cfg = load(c);
  prepare_out(c);
  const auto prob = cfg.problem();
  const auto sh = cfg.shooting();
  const auto curve = trace(cfg, prob, sh);
  const auto ex = curve_extrema(curve, sh);
  const double target = target_mass(cfg, ex);
  SpectrumSettings sp;
  sp.points = cfg.integer("stability.points");
  sp.gap_tolerance = cfg.number("stability.gap_tolerance");
  const auto res = classify_at_mass(curve, target, sh, sp);
  write_curve(c, curve, &ex, "mass curve");
  Json o = envelope("stability", cfg);
  o["extrema"] = to_json(ex);
  o["target"] = target;
  Json arr = Json::array();
  for (const auto& v : res.verdicts) arr.push_back(to_json(v));
  o["verdicts"] = std::move(arr);
  o["notes"] = res.notes;
  write_json_file(path_in(c, "stability.json"), o);
  std::cout << "target=" << fmt(target) << " verdicts:";
  for (const auto& v : res.verdicts)
    std::cout << " " << fmt(v.lambda) << "=" << to_string(v.verdict);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive radial ground states on balls and their mass curves"};
  app.require_subcommand(1);
  Common common;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Entry entries[] = {
      {"solve", "ground state at one lambda", cmd_solve},
      {"trace", "mass curve and its maximum", cmd_trace},
      {"lookup", "all lambda with a prescribed mass", cmd_lookup},
      {"qnorm", "whole-space soliton Q and its mass", cmd_qnorm},
      {"limits", "large-lambda behaviour of the mass curve", cmd_limits},
      {"yanagida", "uniqueness conditions / region table", cmd_yanagida},
      {"stability", "slope verdicts at a prescribed mass", cmd_stability},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("config", common.config_path, "key = value problem file")->required();
    sub->add_option("-o,--out", common.out_dir, "output directory")->capture_default_str();
    sub->add_option("--set", common.overrides, "override a config key (key=value)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (const auto& e : entries) {
    if (!app.got_subcommand(e.name)) continue;
    try {
      return e.run(common);
    } catch (const Error& err) {
      const Json j = to_json(err);
      std::cout << dump_json(j);
      std::error_code ec;
      if (fs::is_directory(common.out_dir, ec)) {
        try {
          write_json_file(path_in(common, "error.json"), j);
        } catch (const Error&) {
        }
      }
      return exit_code(err.kind());
    } catch (const std::exception& ex) {
      const Error wrapped(ErrorKind::Numeric, ex.what());
      std::cout << dump_json(to_json(wrapped));
      return exit_code(ErrorKind::Numeric);
    }
  }
  return 1;
}
