#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "semibound/error.hpp"

namespace semibound::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
  std::set<std::string> ok(known.begin(), known.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer, got " + std::string(j.type_name()));
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where.empty() ? key : where + "." + key, "missing");
  return obj.at(key);
}

GridSpec parse_grid(const json& g, const std::string& where, double default_L) {
  if (!g.is_object()) fail(where, "expected an object");
  reject_unknown(g, where, {"d", "L", "n"});
  GridSpec s;
  s.d = integer(need(g, "d", where), where + ".d");
  s.n = integer(need(g, "n", where), where + ".n");
  s.L = g.contains("L") ? number(g.at("L"), where + ".L") : default_L;
  try {
    s.validate(8);
  } catch (const DomainError& e) {
    fail(where, e.what());
  }
  return s;
}

}  // namespace

SchrodingerConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream m;
    m << "config is not valid JSON at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(m.str());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown(root, "", {"grid", "potential", "gammas", "p", "alpha", "c", "t_grid", "lt_constant", "tolerances",
                            "bridge_grid", "max_points"});

  SchrodingerConfig cfg;
  const json& pot = need(root, "potential", "");
  if (!pot.is_object()) fail("potential", "expected an object");
  reject_unknown(pot, "potential", {"kind", "amplitude", "radius", "eta", "center", "samples"});
  PotentialSpec& V = cfg.potential;
  const json& kind = need(pot, "kind", "potential");
  if (!kind.is_string()) fail("potential.kind", "expected a string");
  try {
    V.kind = potential_kind_from_string(kind.get<std::string>());
  } catch (const DomainError& e) {
    fail("potential.kind", e.what());
  }
  if (pot.contains("amplitude")) V.amplitude = number(pot.at("amplitude"), "potential.amplitude");
  if (pot.contains("radius")) V.radius = number(pot.at("radius"), "potential.radius");
  if (pot.contains("eta")) V.eta = number(pot.at("eta"), "potential.eta");
  if (pot.contains("center")) V.center = numbers(pot.at("center"), "potential.center");

  const json& grid = need(root, "grid", "");
  if (!grid.is_object()) fail("grid", "expected an object");
  V.d = grid.contains("d") ? integer(grid.at("d"), "grid.d") : 1;
  cfg.grid = parse_grid(grid, "grid", 5.0 * (V.is_radial() ? V.radius : 1.0));
  if (V.kind == PotentialKind::grid_sampled) {
    if (!pot.contains("samples")) fail("potential.samples", "missing (required for grid_sampled)");
    V.samples = numbers(pot.at("samples"), "potential.samples");
    V.sample_grid = cfg.grid;
  } else if (pot.contains("samples")) {
    fail("potential.samples", "only valid for grid_sampled");
  }
  try {
    V.validate();
  } catch (const DomainError& e) {
    fail("potential", e.what());
  }

  cfg.gammas = numbers(need(root, "gammas", ""), "gammas");
  if (cfg.gammas.empty()) fail("gammas", "must not be empty");
  if (root.contains("p")) cfg.p = number(root.at("p"), "p");
  if (root.contains("alpha")) cfg.alpha = number(root.at("alpha"), "alpha");
  if (root.contains("c")) cfg.c = number(root.at("c"), "c");
  if (root.contains("t_grid")) cfg.t_grid = numbers(root.at("t_grid"), "t_grid");
  if (root.contains("max_points")) cfg.max_points = integer(root.at("max_points"), "max_points");
  if (root.contains("lt_constant")) {
    const json& lt = root.at("lt_constant");
    if (lt.is_string()) {
      if (lt.get<std::string>() != "semiclassical") fail("lt_constant", "expected a number or \"semiclassical\"");
      cfg.lt_semiclassical = true;
    } else {
      cfg.lt_constant = number(lt, "lt_constant");
      if (!(cfg.lt_constant > 0.0)) fail("lt_constant", "must be > 0");
    }
  }
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    reject_unknown(t, "tolerances", {"slack", "quadrature"});
    if (t.contains("slack")) cfg.tolerances.slack = number(t.at("slack"), "tolerances.slack");
    if (t.contains("quadrature")) cfg.tolerances.quadrature = number(t.at("quadrature"), "tolerances.quadrature");
    if (!(cfg.tolerances.quadrature > 0.0)) fail("tolerances.quadrature", "must be > 0");
    if (!(cfg.tolerances.slack >= 0.0)) fail("tolerances.slack", "must be >= 0");
  }
  if (root.contains("bridge_grid")) {
    cfg.bridge_grid = parse_grid(root.at("bridge_grid"), "bridge_grid", cfg.grid.L);
    if (cfg.bridge_grid->d != V.d) fail("bridge_grid.d", "must match the potential dimension");
    if (cfg.t_grid.empty()) fail("t_grid", "required when bridge_grid is given");
  }
  return cfg;
}

SchrodingerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace semibound::cli
