#pragma once

#include <string>
#include <vector>

#include "semibound/matrix_core.hpp"

namespace semibound {

/// (A, B, t) with σ(A) ⊂ [0, ∞) and cached semigroups.
class SemigroupPair {
 public:
  SemigroupPair(const SymmetricOperator& A, const SymmetricOperator& B, double t);

  const SymmetricOperator& A() const { return A_; }
  const SymmetricOperator& B() const { return B_; }
  double t() const { return t_; }
  Eigen::Index dim() const { return A_.dim(); }

  const SpectralDecomposition& spectrum_A() const { return sA_; }
  const SpectralDecomposition& spectrum_B() const { return sB_; }
  const SymmetricOperator& exp_A() const { return eA_; }  // e^{−tA}
  const SymmetricOperator& exp_B() const { return eB_; }  // e^{−tB}
  const SymmetricOperator& D() const { return D_; }       // e^{−tB} − e^{−tA}
  /// D expressed in the eigenbasis of A.
  const RealMatrix& D_in_A_basis() const { return Dt_; }

  double trace_norm_D() const { return trD_; }
  double hs_norm_D() const { return hsD_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  SymmetricOperator A_, B_;
  double t_;
  SpectralDecomposition sA_, sB_;
  SymmetricOperator eA_, eB_, D_;
  RealMatrix Dt_;
  double trD_ = 0.0, hsD_ = 0.0;
  std::vector<std::string> warnings_;
};

SemigroupPair make_pair(const SymmetricOperator& A, const SymmetricOperator& B, double t);

struct MomentQuery {
  double gamma = 2.0;
  double tol = 1e-8;
};

struct JensenEvaluation {
  double value = 0.0;
  std::vector<double> radial_nodes;                // r ∈ (0, 1)
  std::vector<int> angular_samples_per_node;
  double error_estimate = 0.0;
  std::vector<std::string> warnings;
};

enum class TheoremTag { identity_tr, identity_hs, ggiq, ineqhs, prim, exp, exphs };
std::string to_string(TheoremTag tag);

struct BoundInputs {
  double gamma = 0.0;
  double t = 0.0;
  double norm = 0.0;      // ‖D_t‖_tr, or ‖D_t‖²_HS for the HS bounds
  double constant = 0.0;  // NaN when the bound has no closed-form constant
};

/// `bound` majorizes Σ_{λ∈σ⁻(B)} |λ|^γ.
struct BoundValue {
  double bound = 0.0;
  TheoremTag theorem_tag = TheoremTag::exp;
  BoundInputs inputs;
  double error_estimate = 0.0;
};

double negative_moment_oracle(const SymmetricOperator& B, double gamma);
double negative_moment_oracle(const RealVector& eigenvalues, double gamma);
long count_below(const SymmetricOperator& B, double s);

LogDet h_tr(const SemigroupPair& pair, cplx z);
LogDet h_hs(const SemigroupPair& pair, cplx z);

enum class DetRoute { automatic, dense, tridiagonal };

/// Evaluates log|h(z)| repeatedly with preallocated workspace. The dense route
/// works in the eigenbasis of A; the tridiagonal route uses
/// h_tr = det(I − zE_B)/det(I − zE_A) and det(I+F) = det(I − z(2E_A − E_B))/det(I − zE_A).
class DeterminantEvaluator {
 public:
  explicit DeterminantEvaluator(const SemigroupPair& pair, DetRoute route = DetRoute::automatic);

  double log_abs_h_tr(cplx z);
  double log_abs_h_hs(cplx z);
  /// ‖(I − zE_A)^{−1}D‖_tr
  double resolvent_trace_norm(cplx z);
  /// ‖(I − zE_A)^{−1}D‖²_HS
  double resolvent_hs_norm_sq(cplx z) const;
  DetRoute route() const { return route_; }

 private:
  void fill_F(cplx z);

  const SemigroupPair& pair_;
  DetRoute route_;
  RealVector a_;        // eigenvalues of e^{−tA}
  RealVector row_sq_;   // squared row norms of D in A's eigenbasis
  ComplexMatrix F_, work_;
  TridiagonalForm tA_, tB_, tP_;
};

RealVector jensen_zero_radii(const SemigroupPair& pair);

JensenEvaluation moment_via_jensen_tr(const SemigroupPair& pair, const MomentQuery& q);
JensenEvaluation moment_via_jensen_hs(const SemigroupPair& pair, const MomentQuery& q);

/// Angular mean (1/2π)∫ log|h(re^{iθ})| dθ.
double jensen_angular_mean_tr(const SemigroupPair& pair, double r, double tol = 1e-11);
double jensen_angular_mean_hs(const SemigroupPair& pair, double r, double tol = 1e-11);

BoundValue bound_ggiq(const SemigroupPair& pair, const MomentQuery& q);
BoundValue bound_ineqhs(const SemigroupPair& pair, const MomentQuery& q);
BoundValue bound_prim(const SemigroupPair& pair, double gamma);
BoundValue bound_exp(const SemigroupPair& pair, double gamma);
BoundValue bound_exphs(const SemigroupPair& pair, double gamma);

/// min over the (t, γ) grid of C_tr(γ)(st)^{−γ}‖D_t‖_tr, an upper bound on N(−s).
double counting_bound(const std::vector<SemigroupPair>& pairs, const std::vector<double>& gammas, double s);

}  // namespace semibound
