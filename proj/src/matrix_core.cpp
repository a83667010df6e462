#include "semibound/matrix_core.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "semibound/error.hpp"

namespace semibound {

SymmetricOperator::SymmetricOperator(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("SymmetricOperator: matrix must be square");
  if (m.rows() < 1) throw DomainError("SymmetricOperator: dim must be >= 1");
  asym_ = (m - m.transpose()).cwiseAbs().maxCoeff();
  m_ = 0.5 * (m + m.transpose());
}

SymmetricOperator SymmetricOperator::diagonal(std::span<const double> d) {
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return SymmetricOperator(m);
}

SymmetricOperator SymmetricOperator::zero(Eigen::Index n) { return SymmetricOperator(RealMatrix::Zero(n, n)); }

bool SymmetricOperator::is_tridiagonal() const {
  const auto n = dim();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 2; i < n; ++i)
      if (m_(i, j) != 0.0) return false;
  return true;
}

SymmetricOperator SymmetricOperator::scaled(double s) const { return SymmetricOperator(s * m_); }

SymmetricOperator SymmetricOperator::operator+(const SymmetricOperator& o) const {
  if (o.dim() != dim()) throw DomainError("SymmetricOperator: dimension mismatch");
  return SymmetricOperator(m_ + o.m_);
}

SymmetricOperator SymmetricOperator::operator-(const SymmetricOperator& o) const {
  if (o.dim() != dim()) throw DomainError("SymmetricOperator: dimension mismatch");
  return SymmetricOperator(m_ - o.m_);
}

RealMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

namespace {

void check_info(Eigen::ComputationInfo info) {
  if (info != Eigen::Success)
    throw ConvergenceError("eigh: symmetric QR iteration did not converge within 30*dim iterations",
                           std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity());
}

}  // namespace

SpectralDecomposition eigh(const SymmetricOperator& op) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(op.matrix(), Eigen::ComputeEigenvectors);
  check_info(es.info());
  return {es.eigenvalues(), es.eigenvectors()};
}

RealVector eigvalsh(const SymmetricOperator& op) {
  const auto n = op.dim();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  if (n > 2 && op.is_tridiagonal()) {
    RealVector d = op.matrix().diagonal();
    RealVector e = op.matrix().diagonal(-1);
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  } else {
    es.compute(op.matrix(), Eigen::EigenvaluesOnly);
  }
  check_info(es.info());
  return es.eigenvalues();
}

SymmetricOperator expm_neg(const SpectralDecomposition& s, double t) {
  if (!(t > 0.0)) throw DomainError("expm_neg: t must be > 0");
  RealVector w = (-t * s.eigenvalues.array()).exp().matrix();
  return SymmetricOperator(s.eigenvectors * w.asDiagonal() * s.eigenvectors.transpose());
}

SymmetricOperator expm_neg(const SymmetricOperator& op, double t) { return expm_neg(eigh(op), t); }

namespace {

double norm_from_singular(const RealVector& sv, NormKind kind) {
  switch (kind) {
    case NormKind::trace:
      return sv.sum();
    case NormKind::hilbert_schmidt:
      return sv.norm();
    case NormKind::operator_norm:
      return sv.size() ? sv.maxCoeff() : 0.0;
  }
  return 0.0;
}

template <class M>
RealVector singular_values(const M& m) {
  if (m.rows() <= 32) {
    Eigen::JacobiSVD<M> svd(m);
    return svd.singularValues();
  }
  Eigen::BDCSVD<M> svd(m);
  return svd.singularValues();
}

}  // namespace

double schatten_norm(const SymmetricOperator& m, NormKind kind) {
  if (kind == NormKind::hilbert_schmidt) return m.matrix().norm();
  return norm_from_singular(eigvalsh(m).cwiseAbs(), kind);
}

double schatten_norm(const RealMatrix& m, NormKind kind) {
  if (kind == NormKind::hilbert_schmidt) return m.norm();
  return norm_from_singular(singular_values(m), kind);
}

double schatten_norm(const ComplexMatrix& m, NormKind kind) {
  if (kind == NormKind::hilbert_schmidt) return m.norm();
  return norm_from_singular(singular_values(m), kind);
}

cplx LogDet::value() const {
  if (singular) return {0.0, 0.0};
  return std::polar(std::exp(log_abs), arg);
}

LogDet log_det_inplace(Eigen::Ref<ComplexMatrix> a) {
  const Eigen::Index n = a.rows();
  LogDet out;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    double best = std::abs(a(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      out.singular = true;
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    if (p != k) {
      a.row(k).swap(a.row(p));
      out.arg += std::numbers::pi;
    }
    const cplx piv = a(k, k);
    out.log_abs += std::log(best);
    out.arg += std::arg(piv);
    const cplx inv = 1.0 / piv;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const cplx l = a(i, k) * inv;
      if (l == cplx(0.0)) continue;
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return out;
}

LogDet complex_log_det(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("complex_log_det: matrix must be square");
  ComplexMatrix work = m;
  return log_det_inplace(work);
}

ComplexMatrix resolvent_scaled(const SymmetricOperator& expA, cplx z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("resolvent_scaled: requires |z| < 1");
  const auto n = expA.dim();
  ComplexMatrix m = ComplexMatrix::Identity(n, n) - z * expA.matrix().cast<cplx>();
  return m.partialPivLu().solve(ComplexMatrix::Identity(n, n));
}

TridiagonalForm::TridiagonalForm(const SymmetricOperator& m) {
  if (m.dim() == 1) {
    diag_ = m.matrix().diagonal();
    off_sq_ = RealVector();
    return;
  }
  Eigen::Tridiagonalization<RealMatrix> tri(m.matrix());
  diag_ = tri.diagonal();
  off_sq_ = tri.subDiagonal().array().square().matrix();
}

LogDet TridiagonalForm::log_det_shifted(cplx z) const {
  LogDet out;
  cplx r(1.0, 0.0);
  const cplx z2 = z * z;
  for (Eigen::Index k = 0; k < diag_.size(); ++k) {
    r = k == 0 ? 1.0 - z * diag_[0] : 1.0 - z * diag_[k] - z2 * off_sq_[k - 1] / r;
    if (r == cplx(0.0)) {
      out.singular = true;
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_abs += std::log(std::abs(r));
    out.arg += std::arg(r);
  }
  return out;
}

MatrixReadResult read_matrix(std::istream& in) {
  std::string line;
  std::string key;
  long n = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  std::istringstream head(line);
  if (!(head >> key >> n) || key != "dim" || n < 1)
    throw DomainError("matrix file: first line must be 'dim <n>' with n >= 1");
  RealMatrix m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (!(in >> m(i, j)))
        throw DomainError("matrix file: expected " + std::to_string(n * n) + " entries, read " +
                          std::to_string(i * n + j));
  MatrixReadResult res{SymmetricOperator(m), {}};
  if (res.op.input_asymmetry() > 1e-9) {
    std::ostringstream w;
    w << "matrix not symmetric (max |M_ij - M_ji| = " << res.op.input_asymmetry() << "); using (M+M^T)/2";
    res.warnings.push_back(w.str());
  }
  return res;
}

MatrixReadResult read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open matrix file '" + path + "'");
  return read_matrix(f);
}

void write_matrix(std::ostream& out, const SymmetricOperator& op) {
  const auto n = op.dim();
  out << "dim " << n << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out << (j ? " " : "") << op(i, j);
    out << '\n';
  }
}

}  // namespace semibound
