#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nlsmass/asymptotics.hpp"
#include "nlsmass/config.hpp"
#include "nlsmass/error.hpp"
#include "nlsmass/ground_state.hpp"
#include "nlsmass/mass_curve.hpp"
#include "nlsmass/report.hpp"
#include "nlsmass/stability.hpp"
#include "nlsmass/yanagida.hpp"

namespace nlsmass {

using Json = nlohmann::ordered_json;

// Two-space indented JSON; numbers with 17 significant digits, non-finite
// values as null. Keys keep insertion order.
std::string dump_json(const Json& j);
void write_json_file(const std::string& path, const Json& j);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const Config& cfg);
Json to_json(const ConditionReport& r);
Json to_json(const GroundState& gs);
Json to_json(const QProfile& q);
Json to_json(const MassCurve& curve);
Json to_json(const CurveExtrema& e);
Json to_json(const LookupResult& r);
Json to_json(const LimitsReport& r);
Json to_json(const YanagidaReport& r);
Json to_json(const RegionTable& t);
Json to_json(const StabilityVerdict& v);
Json to_json(const Error& e);

// CSV: lambda,mass,a0,energy
void write_curve_csv(std::ostream& os, const MassCurve& curve);
// gnuplot script plotting `csv_name` (mass against lambda).
std::string curve_plot_script(const std::string& csv_name, const std::string& title,
                              double b = 0.0, double lambda_star = 0.0);
std::string profile_plot_script(const std::string& csv_name, const std::string& title);

}  // namespace nlsmass
