#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace semibound::cli {

/// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_error = 1;      // configuration or domain error
constexpr int exit_violation = 2;  // an identity or inequality check failed

struct Common {
  std::optional<std::string> out;  // artifact directory
  int jobs = 1;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_constants(const std::vector<double>& gammas, double tol, const Common& c, Streams io);
int cmd_verify(const std::string& mode, int dim, int trials, const std::vector<double>& gammas, std::uint64_t seed,
               double tol, const Common& c, Streams io);
int cmd_bound(const std::string& a_path, const std::string& b_path, double t, const std::vector<double>& gammas,
              std::optional<double> s, const Common& c, Streams io);
int cmd_schrodinger(const std::string& config_path, const Common& c, Streams io);
int cmd_scaling_scan(const std::string& config_path, const std::vector<double>& mu, const Common& c, Streams io);

/// Runs f(0..n−1) on up to `jobs` threads; results land in index order.
void parallel_for(int n, int jobs, const std::function<void(int)>& f);

}  // namespace semibound::cli
