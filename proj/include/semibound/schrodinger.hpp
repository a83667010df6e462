#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "semibound/potential.hpp"

namespace semibound {

/// G(x) of (1 − Δ)^{−1} on ℝ^d, as a function of |x|.
double green_kernel(int d, double x_norm);
/// |S^{d−1}|.
double sphere_area(int d);

/// ‖(c − Δ)^{−1}V_−‖_∞. Radial potentials are evaluated at the center,
/// where the convolution of two radially decreasing functions peaks.
double beta_of_c(const PotentialSpec& V, double c);
/// ((c − Δ)^{−1}|V_−|)(x) at |x − center| = x_norm, radial kinds only.
double resolvent_potential_at(const PotentialSpec& V, double c, double x_norm);

struct KalphaOptions {
  double c_min = 0.0;  // 0 selects 1e−6/R²
  double c_max = 0.0;  // 0 selects 1e8/R²
  int scan_points = 121;
  bool require_interior = false;
};

struct KalphaResult {
  double value = 0.0;
  double c_at_sup = 0.0;
  bool at_boundary = false;
};

/// sup_c c^α β(c) over a log-spaced c range, refined by golden section.
KalphaResult kalpha_norm(const PotentialSpec& V, double alpha, const KalphaOptions& opts = {});
/// C_{d,p} = (∫|G|^{p/(p−1)})^{(p−1)/p}, d ≥ 3, p > d/2.
double cdp_constant(int d, double p);
/// Closed-form bound on the K^{2−η} norm of A|x|^{−η}.
double kalpha_from_powerlaw(double A, double eta, int d);
/// Γ(γ+1)/((4π)^{d/2} Γ(γ + d/2 + 1)).
double semiclassical_lt_constant(int d, double gamma);

enum class BoundNorm { L1, L2 };

struct PotentialBound {
  std::string theorem;
  double value = 0.0;
  double c = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double norm_L1 = std::numeric_limits<double>::quiet_NaN();
  double norm_L2 = std::numeric_limits<double>::quiet_NaN();
  double norm_Lp = std::numeric_limits<double>::quiet_NaN();
  double norm_Kalpha = std::numeric_limits<double>::quiet_NaN();
  std::string c_choice;
  std::string kalpha_source;
  bool kalpha_at_boundary = false;
};

/// Prefactor 2^{d/4+1}/(8π)^{d/2} (L1) or 2^{d/4}/(8π)^{d/2} (L2).
double semigroup_prefactor(int d, BoundNorm kind);
/// γ + d/2 − 1 (L1) or γ + d/2 − 2 (L2).
double semigroup_exponent(int d, double gamma, BoundNorm kind);
/// min_{t>0} e^{ct/2}/t^m = (ec/(2m))^m, attained at t = 2m/c.
double t_minimum_closed_form(double c, double m);
/// min_{c > (4K)^{1/α}} c^{δα}/(1 − 4Kc^{−α})^{1/2} = 2^δ(2δ+1)^{δ+1/2}δ^{−δ}K^δ.
double c_minimum_closed_form(double delta, double K);

/// Semigroup bound with c given, or scan-minimized over the admissible c
/// when `c` is empty.
PotentialBound bound_semigroup(const PotentialSpec& V, const GridSpec& grid, double gamma, std::optional<double> c,
                               BoundNorm kind);
PotentialBound bound_kalpha(const PotentialSpec& V, const GridSpec& grid, double gamma, double alpha, BoundNorm kind,
                            const KalphaOptions& opts = {});
PotentialBound bound_lp(const PotentialSpec& V, const GridSpec& grid, double gamma, double p, BoundNorm kind);
double lieb_thirring_rhs(const PotentialSpec& V, const GridSpec& grid, double gamma, double C);
/// Continuum ‖V_−‖_p by radial quadrature (built-in kinds).
double radial_lp_norm(const PotentialSpec& V, double p);

/// Σ|λ|^γ over the negative spectrum of H.
double negative_spectrum_moment(const SymmetricOperator& H, double gamma);
/// −Δ_h + V on the grid.
SymmetricOperator schrodinger_operator(const PotentialSpec& V, const GridSpec& grid,
                                       long max_points = default_max_grid_points);

struct BoundEntry {
  PotentialBound bound;
  std::string error;  // domain/hypothesis failure; the entry carries no value
  bool violated = false;
};

struct ReportOptions {
  std::optional<double> p;
  std::optional<double> alpha;
  std::optional<double> c;  // empty: scan-minimized
  double lt_constant = 1.0;
  bool lt_semiclassical = false;
  double slack = 0.02;
  KalphaOptions kalpha;
  long max_points = default_max_grid_points;
};

/// Oracle moment plus every applicable bound. Lieb–Thirring is a comparison
/// value and never counts as a violation.
struct BoundReport {
  double gamma = 0.0;
  double oracle_moment = 0.0;
  double oracle_moment_negative_part = 0.0;  // same with V replaced by V_−
  std::vector<BoundEntry> bounds;
  double lieb_thirring = std::numeric_limits<double>::quiet_NaN();
  double lt_constant = 1.0;
  bool lt_semiclassical = false;
  std::string lt_error;
  double slack = 0.02;
  bool ok() const;
};

BoundReport bound_report(const PotentialSpec& V, const GridSpec& grid, double gamma, const ReportOptions& opts);

struct MuScanRow {
  double mu = 0.0;
  double our_bound = 0.0;
  double lt_rhs = 0.0;
  std::optional<double> oracle_moment;
  double norm_L1 = 0.0;
  double norm_Lp = 0.0;
};

struct MuScanResult {
  std::vector<MuScanRow> rows;
  double slope_our = 0.0;
  double slope_lt = 0.0;
  double expected_slope = 0.0;      // −2dδ/((2γ+d)p)
  double scaling_law_slope = 0.0;   // exponent implied by ‖V_μ‖_r = μ^{d/(γ+d/2) − d/r}‖W‖_r
  bool curves_cross = false;
};

MuScanRow mu_scan_row(const PotentialSpec& W, const GridSpec& grid, double gamma, double p, double mu,
                      double lt_constant, bool with_oracle, long max_points = default_max_grid_points);
MuScanResult summarize_mu_scan(std::vector<MuScanRow> rows, int d, double gamma, double p);

/// Scales both the potential and the box (L → L/μ, n fixed).
MuScanResult mu_scaling_scan(const PotentialSpec& W, const GridSpec& grid, double gamma, double p,
                             const std::vector<double>& mu_grid, double lt_constant, bool with_oracle,
                             long max_points = default_max_grid_points);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BridgeRow {
  double t = 0.0;
  double oracle_scaled = 0.0;  // Σ|tλ|^γ
  double jensen = 0.0;
  double residual = 0.0;
  double residual_tol = 0.0;
  double oracle = 0.0;         // Σ|λ|^γ of B
  double bound_exp = 0.0;
  std::optional<double> bound_exphs;
  bool identity_ok = false;
  bool bounds_ok = false;
};

struct BridgeReport {
  double gamma = 0.0;
  std::vector<BridgeRow> rows;
  bool ok() const;
};

/// A = −Δ_h, B = A + diag(V_−); Jensen identity and trace/HS bounds per t.
BridgeReport end_to_end_matrix_check(const PotentialSpec& V, const GridSpec& grid, double gamma,
                                     const std::vector<double>& t_grid, double tol = 1e-8);

}  // namespace semibound
