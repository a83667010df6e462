#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semibound/potential.hpp"

namespace semibound::cli {

// Malformed config file or field; message names the line or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double slack = 0.02;        // relative discretization slack for bound ≥ oracle
  double quadrature = 1e-8;   // Jensen quadrature tolerance (bridge)
};

struct SchrodingerConfig {
  GridSpec grid;
  PotentialSpec potential;
  std::vector<double> gammas;
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<double> c;
  std::vector<double> t_grid;
  double lt_constant = 1.0;
  bool lt_semiclassical = false;
  Tolerances tolerances;
  std::optional<GridSpec> bridge_grid;
  long max_points = default_max_grid_points;
};

SchrodingerConfig parse_config(const std::string& text);
SchrodingerConfig load_config(const std::string& path);

}  // namespace semibound::cli
