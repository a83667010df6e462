#include "semibound/jensen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/quadrature.hpp"
#include "semibound/specfun.hpp"

namespace semibound {

namespace {

constexpr double psd_slack = 1e-10;
constexpr double boundary_pole_eps = 1e-8;
constexpr int dense_route_max_dim = 16;
constexpr double angular_tol = 1e-11;

void check_z(cplx z, const char* who) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream m;
    m << who << ": requires |z| < 1, got |z| = " << std::abs(z);
    throw DomainError(m.str());
  }
}

void check_gamma_moment(double gamma, const char* who) {
  if (!(gamma >= 1.0)) {
    std::ostringstream m;
    m << who << ": requires gamma >= 1, got " << gamma;
    throw DomainError(m.str());
  }
}

}  // namespace

SemigroupPair::SemigroupPair(const SymmetricOperator& A, const SymmetricOperator& B, double t)
    : A_(A), B_(B), t_(t) {
  if (A.dim() != B.dim()) throw DomainError("make_pair: A and B must have the same dimension");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("make_pair: t must be a positive finite number");
  sA_ = eigh(A_);
  const double amin = sA_.eigenvalues.minCoeff();
  if (amin < -psd_slack) {
    std::ostringstream m;
    m << "make_pair: A must satisfy sigma(A) in [0, inf) (smallest eigenvalue " << amin
      << " < -1e-10); the determinant h(z) is only analytic in the unit disk under this hypothesis";
    throw HypothesisError(m.str());
  }
  if (amin < boundary_pole_eps) {
    std::ostringstream m;
    m << "A has an eigenvalue within 1e-8 of 0 (" << amin << "): h has a pole on the unit circle";
    warnings_.push_back(m.str());
  }
  sA_.eigenvalues = sA_.eigenvalues.cwiseMax(0.0);
  sB_ = eigh(B_);
  eA_ = expm_neg(sA_, t_);
  eB_ = expm_neg(sB_, t_);
  D_ = eB_ - eA_;
  Dt_ = sA_.eigenvectors.transpose() * D_.matrix() * sA_.eigenvectors;
  trD_ = schatten_norm(D_, NormKind::trace);
  hsD_ = schatten_norm(D_, NormKind::hilbert_schmidt);
}

SemigroupPair make_pair(const SymmetricOperator& A, const SymmetricOperator& B, double t) {
  return SemigroupPair(A, B, t);
}

std::string to_string(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::identity_tr: return "identity_tr";
    case TheoremTag::identity_hs: return "identity_hs";
    case TheoremTag::ggiq: return "ggiq";
    case TheoremTag::ineqhs: return "ineqhs";
    case TheoremTag::prim: return "prim";
    case TheoremTag::exp: return "exp";
    case TheoremTag::exphs: return "exphs";
  }
  return "?";
}

double negative_moment_oracle(const RealVector& ev, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("negative_moment_oracle: requires gamma >= 0");
  // Eigenvalues arrive sorted, which fixes the summation order.
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) s += gamma == 0.0 ? 1.0 : std::pow(-ev[i], gamma);
  return s;
}

double negative_moment_oracle(const SymmetricOperator& B, double gamma) {
  return negative_moment_oracle(eigvalsh(B), gamma);
}

long count_below(const SymmetricOperator& B, double s) {
  if (!(s > 0.0)) throw DomainError("count_below: requires s > 0");
  const RealVector ev = eigvalsh(B);
  return static_cast<long>(std::count_if(ev.begin(), ev.end(), [s](double l) { return l < -s; }));
}

LogDet h_tr(const SemigroupPair& pair, cplx z) {
  check_z(z, "h_tr");
  const auto n = pair.dim();
  const ComplexMatrix F = z * resolvent_scaled(pair.exp_A(), z) * pair.D().matrix().cast<cplx>();
  return complex_log_det(ComplexMatrix::Identity(n, n) - F);
}

LogDet h_hs(const SemigroupPair& pair, cplx z) {
  check_z(z, "h_hs");
  const auto n = pair.dim();
  const ComplexMatrix F = z * resolvent_scaled(pair.exp_A(), z) * pair.D().matrix().cast<cplx>();
  return complex_log_det(ComplexMatrix::Identity(n, n) - F * F);
}

DeterminantEvaluator::DeterminantEvaluator(const SemigroupPair& pair, DetRoute route) : pair_(pair), route_(route) {
  const auto n = pair.dim();
  if (route_ == DetRoute::automatic) route_ = n > dense_route_max_dim ? DetRoute::tridiagonal : DetRoute::dense;
  a_ = (-pair.t() * pair.spectrum_A().eigenvalues.array()).exp().matrix();
  row_sq_ = pair.D_in_A_basis().rowwise().squaredNorm();
  if (route_ == DetRoute::dense) {
    F_.resize(n, n);
    work_.resize(n, n);
  } else {
    tA_ = TridiagonalForm(pair.exp_A());
    tB_ = TridiagonalForm(pair.exp_B());
    tP_ = TridiagonalForm(pair.exp_A().scaled(2.0) - pair.exp_B());
  }
}

void DeterminantEvaluator::fill_F(cplx z) {
  const auto n = pair_.dim();
  const RealMatrix& Dt = pair_.D_in_A_basis();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx s = z / (1.0 - z * a_[i]);
    for (Eigen::Index j = 0; j < n; ++j) F_(i, j) = s * Dt(i, j);
  }
}

double DeterminantEvaluator::log_abs_h_tr(cplx z) {
  if (route_ == DetRoute::tridiagonal) return tB_.log_det_shifted(z).log_abs - tA_.log_det_shifted(z).log_abs;
  fill_F(z);
  work_ = -F_;
  work_.diagonal().array() += 1.0;
  return log_det_inplace(work_).log_abs;
}

double DeterminantEvaluator::log_abs_h_hs(cplx z) {
  if (route_ == DetRoute::tridiagonal) {
    const double la = tA_.log_det_shifted(z).log_abs;
    return tB_.log_det_shifted(z).log_abs + tP_.log_det_shifted(z).log_abs - 2.0 * la;
  }
  fill_F(z);
  work_.noalias() = -F_ * F_;
  work_.diagonal().array() += 1.0;
  return log_det_inplace(work_).log_abs;
}

double DeterminantEvaluator::resolvent_trace_norm(cplx z) {
  // diag(1/(1 − z a)) = unitary phase · diag(1/|1 − z a|), so the singular
  // values are those of a real matrix.
  const RealMatrix& Dt = pair_.D_in_A_basis();
  RealMatrix m(Dt.rows(), Dt.cols());
  for (Eigen::Index i = 0; i < Dt.rows(); ++i) m.row(i) = Dt.row(i) / std::abs(1.0 - z * a_[i]);
  return schatten_norm(m, NormKind::trace);
}

double DeterminantEvaluator::resolvent_hs_norm_sq(cplx z) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a_.size(); ++i) s += row_sq_[i] / std::norm(1.0 - z * a_[i]);
  return s;
}

RealVector jensen_zero_radii(const SemigroupPair& pair) {
  std::vector<double> rho;
  for (Eigen::Index i = 0; i < pair.spectrum_B().eigenvalues.size(); ++i) {
    const double l = pair.spectrum_B().eigenvalues[i];
    if (l < 0.0) rho.push_back(std::exp(pair.t() * l));
  }
  std::sort(rho.begin(), rho.end());
  return Eigen::Map<RealVector>(rho.data(), static_cast<Eigen::Index>(rho.size()));
}

namespace {

enum class Det { tr, hs };

double angular_log_mean(DeterminantEvaluator& ev, Det kind, double r, double tol, int* samples) {
  auto f = [&](double theta) {
    const cplx z = std::polar(r, theta);
    return kind == Det::tr ? ev.log_abs_h_tr(z) : ev.log_abs_h_hs(z);
  };
  const PeriodicMeanResult m = even_periodic_mean(f, tol);
  if (samples) *samples = m.nodes;
  return m.value;
}

JensenEvaluation jensen_limit(const SemigroupPair& pair, Det kind, const MomentQuery& q) {
  // γ = 1: lim_{r→1} of the angular mean, Richardson in h = 1 − r = 2^{−k}.
  constexpr int kmax = 20;
  constexpr int max_order = 6;
  DeterminantEvaluator ev(pair);
  JensenEvaluation out;
  out.warnings = pair.warnings();
  std::vector<std::vector<double>> T;
  std::vector<double> raw;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= kmax; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    int samples = 0;
    const double m = angular_log_mean(ev, kind, r, std::min(angular_tol, 0.1 * q.tol), &samples);
    out.radial_nodes.push_back(r);
    out.angular_samples_per_node.push_back(samples);
    raw.push_back(m);
    std::vector<double> row{m};
    const int order = std::min(k - 1, max_order);
    for (int j = 1; j <= order; ++j) {
      const double p = std::ldexp(1.0, j);
      row.push_back(row[j - 1] + (row[j - 1] - T.back()[j - 1]) / (p - 1.0));
    }
    T.push_back(row);
    const double est = row.back();
    if (k >= 4 && std::abs(est - prev) < q.tol) {
      out.value = est;
      out.error_estimate = std::abs(est - prev);
      return out;
    }
    prev = est;
  }
  // Divergence diagnostics: monotone growth over the last halvings.
  bool growing = true;
  for (std::size_t i = raw.size() - 5; i + 1 < raw.size(); ++i)
    growing = growing && (raw[i + 1] - raw[i] > 1.0);
  std::ostringstream m;
  m.precision(10);
  m << "jensen: r -> 1 extrapolation did not settle after " << kmax << " halvings (last angular means "
    << raw[raw.size() - 2] << ", " << raw.back() << ")";
  if (growing) m << "; the sequence grows without bound, the moment is infinite";
  throw ConvergenceError(m.str(), prev, std::abs(T.back().back() - T[T.size() - 2].back()));
}

JensenEvaluation jensen_moment(const SemigroupPair& pair, Det kind, const MomentQuery& q, const char* who) {
  check_gamma_moment(q.gamma, who);
  if (!(q.tol > 0.0)) throw DomainError(std::string(who) + ": tol must be > 0");
  if (q.gamma == 1.0) return jensen_limit(pair, kind, q);
  const double g = q.gamma;
  const double pref = g * (g - 1.0);
  DeterminantEvaluator ev(pair);
  JensenEvaluation out;
  out.warnings = pair.warnings();
  const double atol = std::min(angular_tol, 1e-3 * q.tol);
  // s = −log r; ∫₀¹ (1/r)|log r|^{γ−2} M(r) dr = ∫₀^∞ s^{γ−2} M(e^{−s}) ds.
  auto integrand = [&](const Abscissa& p) {
    const double s = p.from_left;
    const double r = std::exp(-s);
    if (r == 0.0 || !(r < 1.0)) return 0.0;
    int samples = 0;
    const double m = angular_log_mean(ev, kind, r, atol, &samples);
    out.radial_nodes.push_back(r);
    out.angular_samples_per_node.push_back(samples);
    return std::pow(s, g - 2.0) * m;
  };
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_panels = 2000;
  try {
    const QuadResult res = adaptive_quad(EndpointIntegrand(integrand), 0.0, std::numeric_limits<double>::infinity(),
                                         q.tol / pref, {true, false}, opts);
    out.value = pref * res.value;
    out.error_estimate = pref * res.error_estimate;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(who) + ": " + e.what(), pref * e.best_estimate(),
                           pref * e.error_estimate());
  }
  return out;
}

enum class Norm { tr, hs };

BoundValue resolvent_bound(const SemigroupPair& pair, Norm kind, const MomentQuery& q, const char* who) {
  if (!(q.gamma > 1.0)) {
    std::ostringstream m;
    m << who << ": requires gamma > 1, got " << q.gamma;
    throw DomainError(m.str());
  }
  const double g = q.gamma;
  const double pref = g * (g - 1.0);
  BoundValue out;
  out.theorem_tag = kind == Norm::tr ? TheoremTag::ggiq : TheoremTag::ineqhs;
  const double norm = kind == Norm::tr ? pair.trace_norm_D() : pair.hs_norm_D() * pair.hs_norm_D();
  out.inputs = {g, pair.t(), norm, std::numeric_limits<double>::quiet_NaN()};
  if (norm == 0.0) return out;
  DeterminantEvaluator ev(pair);
  const double amax = (-pair.t() * pair.spectrum_A().eigenvalues.array()).exp().maxCoeff();
  const double tg = std::pow(pair.t(), g);
  auto integrand = [&](const Abscissa& p) {
    const double s = p.from_left;
    const double r = std::exp(-s);
    if (r == 0.0 || !(r < 1.0)) return 0.0;
    const double scale = kind == Norm::tr ? norm / (1.0 - r * amax) : norm / std::pow(1.0 - r * amax, 2);
    auto f = [&](double theta) {
      const cplx z = std::polar(r, theta);
      return kind == Norm::tr ? ev.resolvent_trace_norm(z) : ev.resolvent_hs_norm_sq(z);
    };
    const PeriodicMeanResult m = even_periodic_mean(f, 1e-11 * scale);
    const double w = kind == Norm::tr ? r : r * r;
    return std::pow(s, g - 2.0) * w * m.value;
  };
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.max_panels = 2000;
  const double tol = q.tol * tg / pref;
  try {
    const QuadResult res = adaptive_quad(EndpointIntegrand(integrand), 0.0, std::numeric_limits<double>::infinity(),
                                         tol, {true, false}, opts);
    out.bound = pref * res.value / tg;
    out.error_estimate = pref * res.error_estimate / tg;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(who) + ": " + e.what(), pref * e.best_estimate() / tg,
                           pref * e.error_estimate() / tg);
  }
  return out;
}

}  // namespace

JensenEvaluation moment_via_jensen_tr(const SemigroupPair& pair, const MomentQuery& q) {
  return jensen_moment(pair, Det::tr, q, "moment_via_jensen_tr");
}

JensenEvaluation moment_via_jensen_hs(const SemigroupPair& pair, const MomentQuery& q) {
  return jensen_moment(pair, Det::hs, q, "moment_via_jensen_hs");
}

double jensen_angular_mean_tr(const SemigroupPair& pair, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("jensen_angular_mean_tr: requires 0 <= r < 1");
  DeterminantEvaluator ev(pair);
  return angular_log_mean(ev, Det::tr, r, tol, nullptr);
}

double jensen_angular_mean_hs(const SemigroupPair& pair, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("jensen_angular_mean_hs: requires 0 <= r < 1");
  DeterminantEvaluator ev(pair);
  return angular_log_mean(ev, Det::hs, r, tol, nullptr);
}

BoundValue bound_ggiq(const SemigroupPair& pair, const MomentQuery& q) {
  return resolvent_bound(pair, Norm::tr, q, "bound_ggiq");
}

BoundValue bound_ineqhs(const SemigroupPair& pair, const MomentQuery& q) {
  return resolvent_bound(pair, Norm::hs, q, "bound_ineqhs");
}

BoundValue bound_prim(const SemigroupPair& pair, double gamma) {
  if (!(gamma > 2.0)) {
    std::ostringstream m;
    m << "bound_prim: requires gamma > 2 (the Gamma-zeta constant is infinite for gamma <= 2), got " << gamma;
    throw DomainError(m.str());
  }
  const double c = prim_constant(gamma);
  const double n = pair.trace_norm_D();
  return {n == 0.0 ? 0.0 : c * n / std::pow(pair.t(), gamma), TheoremTag::prim, {gamma, pair.t(), n, c}, 0.0};
}

BoundValue bound_exp(const SemigroupPair& pair, double gamma) {
  if (!(gamma > 1.0)) {
    std::ostringstream m;
    m << "bound_exp: requires gamma > 1 (no bound of this form holds for gamma < 1), got " << gamma;
    throw DomainError(m.str());
  }
  const double c = constant_tr(gamma);
  const double n = pair.trace_norm_D();
  return {n == 0.0 ? 0.0 : c * n / std::pow(pair.t(), gamma), TheoremTag::exp, {gamma, pair.t(), n, c}, 0.0};
}

BoundValue bound_exphs(const SemigroupPair& pair, double gamma) {
  if (!(gamma > 2.0)) {
    std::ostringstream m;
    m << "bound_exphs: requires gamma > 2 (the Hilbert-Schmidt bound fails for gamma < 2), got " << gamma;
    throw DomainError(m.str());
  }
  const double n = pair.hs_norm_D() * pair.hs_norm_D();
  if (n == 0.0) return {0.0, TheoremTag::exphs, {gamma, pair.t(), 0.0, std::numeric_limits<double>::quiet_NaN()}, 0.0};
  const double c = constant_hs(gamma);
  return {c * n / std::pow(pair.t(), gamma), TheoremTag::exphs, {gamma, pair.t(), n, c}, 0.0};
}

double counting_bound(const std::vector<SemigroupPair>& pairs, const std::vector<double>& gammas, double s) {
  if (!(s > 0.0)) throw DomainError("counting_bound: requires s > 0");
  if (pairs.empty() || gammas.empty()) throw DomainError("counting_bound: the (t, gamma) grid is empty");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs)
    for (double g : gammas) {
      if (!(g > 1.0)) throw DomainError("counting_bound: every gamma must be > 1");
      const double v = p.trace_norm_D() == 0.0 ? 0.0 : constant_tr(g) * p.trace_norm_D() / std::pow(s * p.t(), g);
      best = std::min(best, v);
    }
  return best;
}

}  // namespace semibound
