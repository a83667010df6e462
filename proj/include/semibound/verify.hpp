#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semibound/matrix_core.hpp"

namespace semibound {

enum class VerifyMode { identity_tr, identity_hs, chain_tr, chain_hs };

std::string to_string(VerifyMode m);
VerifyMode verify_mode_from_string(const std::string& s);

struct RandomPair {
  SymmetricOperator A, B;
  double t = 1.0;
  int draws = 0;  // attempts needed to get a negative spectrum
};

/// A = GᵀG/n + 0.05·I, B = A − ρHᵀH/n with Gaussian G, H and ρ ∈ [0.5, 2],
/// t ∈ [0.5, 1.5]. Redraws until B has an eigenvalue below −1e−6, at most
/// 100 times. The stream is seeded from (seed, trial) only.
std::optional<RandomPair> random_pair(int dim, std::uint64_t seed, std::uint64_t trial);

enum class RowStatus { ok, violation, skipped, domain };
std::string to_string(RowStatus s);

struct VerifyRow {
  int trial = 0;
  int dim = 0;
  int draws = 0;
  double t = 0.0;
  double gamma = 0.0;
  std::optional<double> oracle;  // Σ|λ|^γ over σ⁻(B), or of tB in identity modes
  std::optional<double> jensen;  // trace or HS Jensen integral (moment of tB)
  std::optional<double> residual, tolerance;
  std::optional<double> ggiq, exp, prim;
  std::optional<double> ineqhs, exphs;
  RowStatus status = RowStatus::ok;
  std::string note;
};

/// Relative slack for the inequality chains; the quadrature tol is added on top.
constexpr double chain_slack = 1e-9;

/// One row per γ for the given trial.
std::vector<VerifyRow> run_trial(VerifyMode mode, int dim, int trial, const std::vector<double>& gammas,
                                 std::uint64_t seed, double tol);

}  // namespace semibound
