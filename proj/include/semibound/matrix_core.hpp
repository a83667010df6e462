#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace semibound {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

enum class NormKind { trace, hilbert_schmidt, operator_norm };

/// Dense real symmetric matrix. The input is replaced by (M + Mᵀ)/2, so the
/// stored entries are exactly symmetric.
class SymmetricOperator {
 public:
  SymmetricOperator() = default;
  explicit SymmetricOperator(const RealMatrix& m);

  static SymmetricOperator diagonal(std::span<const double> d);
  static SymmetricOperator zero(Eigen::Index n);

  Eigen::Index dim() const { return m_.rows(); }
  const RealMatrix& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  /// max |M_ij − M_ji| of the matrix handed to the constructor.
  double input_asymmetry() const { return asym_; }
  bool is_tridiagonal() const;

  SymmetricOperator scaled(double s) const;
  SymmetricOperator operator+(const SymmetricOperator& o) const;
  SymmetricOperator operator-(const SymmetricOperator& o) const;

 private:
  RealMatrix m_;
  double asym_ = 0.0;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  RealMatrix eigenvectors;  // columns

  RealMatrix reconstruct() const;
};

SpectralDecomposition eigh(const SymmetricOperator& op);
RealVector eigvalsh(const SymmetricOperator& op);

/// e^{−t·op} via the spectral decomposition.
SymmetricOperator expm_neg(const SymmetricOperator& op, double t);
SymmetricOperator expm_neg(const SpectralDecomposition& s, double t);

double schatten_norm(const SymmetricOperator& m, NormKind kind);
double schatten_norm(const ComplexMatrix& m, NormKind kind);
double schatten_norm(const RealMatrix& m, NormKind kind);

struct LogDet {
  double log_abs = 0.0;  // −∞ for a singular matrix
  double arg = 0.0;      // accumulated, not reduced mod 2π
  bool singular = false;

  cplx value() const;
};

LogDet complex_log_det(const ComplexMatrix& m);
/// Same, overwriting `m` with its LU factors. No allocation.
LogDet log_det_inplace(Eigen::Ref<ComplexMatrix> m);

/// (I − z·expA)^{−1} for |z| < 1.
ComplexMatrix resolvent_scaled(const SymmetricOperator& expA, cplx z);

/// Symmetric tridiagonal T = QᵀMQ, used for det(I − zM) = det(I − zT).
class TridiagonalForm {
 public:
  TridiagonalForm() = default;
  explicit TridiagonalForm(const SymmetricOperator& m);

  LogDet log_det_shifted(cplx z) const;  // log det(I − zT)
  Eigen::Index dim() const { return diag_.size(); }

 private:
  RealVector diag_;
  RealVector off_sq_;  // squared sub-diagonal
};

// Matrix text format: "dim n" then n rows of n entries.
struct MatrixReadResult {
  SymmetricOperator op;
  std::vector<std::string> warnings;
};

MatrixReadResult read_matrix(std::istream& in);
MatrixReadResult read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const SymmetricOperator& op);

}  // namespace semibound
