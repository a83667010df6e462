#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace semibound::cli {

using nlohmann::json;

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

std::string csv_num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string csv_num(const std::optional<double>& v) { return v ? csv_num(*v) : ""; }

void Table::print(std::ostream& os) const {
  std::vector<std::size_t> w(headers_.size());
  for (std::size_t i = 0; i < headers_.size(); ++i) w[i] = headers_[i].size();
  for (const auto& r : rows_)
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string& s = i < r.size() ? r[i] : std::string();
      os << (i ? "  " : "") << std::setw(static_cast<int>(w[i])) << s;
    }
    os << '\n';
  };
  line(headers_);
  for (const auto& r : rows_) line(r);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void csv_line(std::ostringstream& os, const std::vector<std::string>& r) {
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
  os << '\n';
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string Csv::str() const {
  std::ostringstream os;
  csv_line(os, header_);
  for (const auto& r : rows_) csv_line(os, r);
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

json to_json(const GammaConstants& g) {
  return json{{"gamma", g.gamma},       {"C_tr", opt(g.C_tr)}, {"C_HS", opt(g.C_HS)},
              {"prim_constant", opt(g.prim_constant)}, {"lower_bound", opt(g.lower_bound)},
              {"c1", opt(g.c1)},        {"c2", opt(g.c2)},     {"c3", opt(g.c3)},
              {"c4", opt(g.c4)},        {"c5", opt(g.c5)},     {"c6", opt(g.c6)},
              {"quadrature_tol", g.quadrature_tol}};
}

json to_json(const PotentialBound& b) {
  return json{{"theorem", b.theorem},
              {"value", b.value},
              {"c", b.c},
              {"c_choice", b.c_choice},
              {"beta", b.beta},
              {"t", b.t},
              {"delta", b.delta},
              {"kappa", b.kappa},
              {"alpha", b.alpha},
              {"p", b.p},
              {"norms", {{"L1", b.norm_L1}, {"L2", b.norm_L2}, {"Lp", b.norm_Lp}, {"Kalpha", b.norm_Kalpha}}},
              {"kalpha_source", b.kalpha_source},
              {"kalpha_at_boundary", b.kalpha_at_boundary}};
}

json to_json(const BoundReport& r) {
  json bounds = json::array();
  for (const auto& e : r.bounds) {
    json j = e.error.empty() ? to_json(e.bound) : json{{"theorem", e.bound.theorem}};
    j["error"] = e.error.empty() ? json(nullptr) : json(e.error);
    j["violated"] = e.violated;
    bounds.push_back(j);
  }
  json lt{{"value", r.lieb_thirring},
          {"constant", r.lt_constant},
          {"constant_source", r.lt_semiclassical ? "semiclassical (external)" : "caller-supplied"}};
  if (!r.lt_error.empty()) lt["error"] = r.lt_error;
  return json{{"gamma", r.gamma},
              {"oracle_moment", r.oracle_moment},
              {"oracle_moment_negative_part", r.oracle_moment_negative_part},
              {"slack", r.slack},
              {"bounds", bounds},
              {"lieb_thirring", lt},
              {"ok", r.ok()}};
}

json to_json(const MuScanResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"mu", row.mu},
                        {"our_bound", row.our_bound},
                        {"lt_rhs", row.lt_rhs},
                        {"oracle_moment", opt(row.oracle_moment)},
                        {"norm_L1", row.norm_L1},
                        {"norm_Lp", row.norm_Lp}});
  return json{{"rows", rows},
              {"slope_our", r.slope_our},
              {"slope_lt", r.slope_lt},
              {"expected_slope", r.expected_slope},
              {"scaling_law_slope", r.scaling_law_slope},
              {"curves_cross", r.curves_cross}};
}

json to_json(const BridgeReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"t", row.t},
                        {"oracle_scaled", row.oracle_scaled},
                        {"jensen", row.jensen},
                        {"residual", row.residual},
                        {"residual_tol", row.residual_tol},
                        {"oracle", row.oracle},
                        {"bound_exp", row.bound_exp},
                        {"bound_exphs", opt(row.bound_exphs)},
                        {"identity_ok", row.identity_ok},
                        {"bounds_ok", row.bounds_ok}});
  return json{{"gamma", r.gamma}, {"rows", rows}, {"ok", r.ok()}};
}

json to_json(const VerifyRow& r) {
  return json{{"trial", r.trial},         {"dim", r.dim},
              {"draws", r.draws},         {"t", r.t},
              {"gamma", r.gamma},         {"oracle", opt(r.oracle)},
              {"jensen", opt(r.jensen)},  {"residual", opt(r.residual)},
              {"tolerance", opt(r.tolerance)}, {"ggiq", opt(r.ggiq)},
              {"exp", opt(r.exp)},        {"prim", opt(r.prim)},
              {"ineqhs", opt(r.ineqhs)},  {"exphs", opt(r.exphs)},
              {"status", to_string(r.status)}, {"note", r.note}};
}

json to_json(const GridSpec& g) { return json{{"d", g.d}, {"L", g.L}, {"n", g.n}, {"h", g.h()}}; }

json to_json(const PotentialSpec& v) {
  json j{{"kind", to_string(v.kind)}, {"d", v.d}, {"amplitude", v.amplitude}};
  if (v.is_radial()) j["radius"] = v.radius;
  if (v.kind == PotentialKind::power_law_cutoff) j["eta"] = v.eta;
  if (!v.center.empty()) j["center"] = v.center;
  if (v.kind == PotentialKind::grid_sampled) j["kato"] = "caller-asserted";
  return j;
}

std::vector<std::string> verify_csv_header() {
  return {"trial", "dim", "draws", "t", "gamma", "oracle", "jensen", "residual", "tolerance",
          "ggiq", "exp", "prim", "ineqhs", "exphs", "status", "note"};
}

std::vector<std::string> verify_csv_row(const VerifyRow& r) {
  return {std::to_string(r.trial), std::to_string(r.dim), std::to_string(r.draws), csv_num(r.t),
          csv_num(r.gamma),        csv_num(r.oracle),      csv_num(r.jensen),       csv_num(r.residual),
          csv_num(r.tolerance),    csv_num(r.ggiq),        csv_num(r.exp),          csv_num(r.prim),
          csv_num(r.ineqhs),       csv_num(r.exphs),       to_string(r.status),     r.note};
}

}  // namespace semibound::cli
