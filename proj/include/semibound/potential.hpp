#pragma once

#include <span>
#include <string>
#include <vector>

#include "semibound/matrix_core.hpp"

namespace semibound {

constexpr long default_max_grid_points = 4096;

/// Uniform interior grid of [−L, L]^d with n nodes per axis and Dirichlet
/// walls at ±L, so h = 2L/(n + 1).
struct GridSpec {
  int d = 1;
  double L = 1.0;
  int n = 8;

  double h() const { return 2.0 * L / (n + 1); }
  double node(int i) const { return -L + (i + 1) * h(); }
  long points() const;
  double cell_volume() const;
  /// Coordinates of flat index k (axis 0 varies slowest).
  void coords(long k, std::span<double> x) const;
  /// Throws DomainError unless d ∈ {1,2,3}, L > 0, n ≥ min_n.
  void validate(int min_n = 8) const;
};

enum class PotentialKind { square_well, gaussian_well, power_law_cutoff, grid_sampled };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

/// V(x) = −A·profile(|x − center|):
///   square_well       profile = 1 for r < R, 0 otherwise
///   gaussian_well     profile = exp(−r²/(2R²))
///   power_law_cutoff  profile = r^{−η} for r < R, 0 otherwise, η ∈ (0, min(2, d))
/// A > 0 is attractive. All three are bounded or have an integrable
/// singularity below the Kato threshold, so they are Kato potentials.
/// grid_sampled holds node values on `sample_grid`; Kato membership is the
/// caller's assertion.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::square_well;
  int d = 1;
  double amplitude = 1.0;
  double radius = 1.0;
  double eta = 1.0;
  std::vector<double> center;  // empty means the origin
  GridSpec sample_grid;
  std::vector<double> samples;

  void validate() const;
  bool is_radial() const { return kind != PotentialKind::grid_sampled; }
  /// Length scale used for default boxes and c ranges.
  double support_radius() const;
  /// V at distance r from the center; `cap_radius` regularizes the power law
  /// at r < cap_radius.
  double radial_value(double r, double cap_radius = 0.0) const;
  /// |V_−| at distance r (built-in kinds).
  double radial_negative_part(double r) const;
  /// V_μ(x) = μ^{d/(γ + d/2)} V(μx).
  PotentialSpec scaled(double mu, double gamma) const;
};

struct DiscretePotential {
  RealVector values;
  RealVector negative_part;  // min(V, 0) ≤ 0
  SymmetricOperator diagonal() const;
  SymmetricOperator negative_diagonal() const;
};

/// Default box for a potential: L = 5 × support radius.
GridSpec default_grid(const PotentialSpec& V, int n);

SymmetricOperator laplacian_matrix(const GridSpec& grid, long max_points = default_max_grid_points);
/// Pointwise sampling at grid nodes; the power law is capped at the value
/// attained half a grid cell from its singularity.
DiscretePotential discretize(const PotentialSpec& V, const GridSpec& grid);

/// (h^d Σ |v|^p)^{1/p}.
double lp_norm(const RealVector& v_minus, const GridSpec& grid, double p);

}  // namespace semibound
