#include "semibound/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/jensen.hpp"
#include "semibound/quadrature.hpp"
#include "semibound/specfun.hpp"

namespace semibound {

namespace {

using std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double golden = 0.6180339887498949;

QuadOptions rel_opts(double rel) {
  QuadOptions o;
  o.rel_tol = rel;
  o.max_panels = 4000;
  return o;
}

// Maximizes f on [lo, hi] (f unimodal there).
template <class F>
std::pair<double, double> golden_max(F f, double lo, double hi, int iters = 80) {
  double a = lo, b = hi;
  double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-13 * (std::abs(a) + std::abs(b) + 1e-300); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + golden * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - golden * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Spherical mean of G over |y| = rho, seen from a point at distance X from
// the center (c = 1 units).
double spherical_mean_green(int d, double X, double rho) {
  const double a = std::min(X, rho), b = std::max(X, rho);
  switch (d) {
    case 1: return 0.25 * (std::exp(-(b - a)) + std::exp(-(a + b)));
    case 2: {
      if (a == 0.0) return green_kernel(2, b);
      if (a < 50.0) return std::cyl_bessel_i(0.0, a) * bessel_k(0.0, b) / (2.0 * pi);
      // I₀(a)K₀(b) from the large-argument expansions, kept in scaled form.
      auto ser = [](double x, double s) {
        return 1.0 + s / (8.0 * x) + 9.0 / (128.0 * x * x) + s * 225.0 / (3072.0 * x * x * x);
      };
      return std::exp(a - b) / (2.0 * std::sqrt(a * b)) * ser(a, 1.0) * ser(b, -1.0) / (2.0 * pi);
    }
    case 3:
      if (a == 0.0) return green_kernel(3, b);
      return 2.0 * std::sinh(a) * std::exp(-b) / (8.0 * pi * a * b);
  }
  throw DomainError("spherical_mean_green: d must be 1, 2 or 3");
}

// G(ρ)ρ^{d−1} = (2π)^{−d/2}K_ν(ρ)ρ^{d/2}, finite down to ρ → 0 for d ≥ 2.
double green_weight(int d, double rho) {
  return std::pow(2.0 * pi, -0.5 * d) * bessel_k(std::abs(0.5 * d - 1.0), rho) * std::pow(rho, 0.5 * d);
}

void require_radial(const PotentialSpec& V, const char* what) {
  if (!V.is_radial()) throw DomainError(std::string(what) + ": needs a radial (built-in) potential kind");
}

// |V_−(ρ/√c)| in the rescaled radial variable.
double scaled_profile(const PotentialSpec& V, double c, double rho) {
  return V.radial_negative_part(rho / std::sqrt(c));
}

// ∫_{lo}^{hi} with the breakpoints that matter for radial profiles.
double radial_integral(const std::function<double(const Abscissa&)>& f, std::vector<double> cuts, bool singular_at_0) {
  cuts.push_back(0.0);
  cuts.push_back(inf);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    EndpointFlags fl{a == 0.0 ? singular_at_0 : true, std::isfinite(b)};
    // Integrable singularities at 0 contribute nothing measurable below 1e−250.
    auto g = [&](const Abscissa& p) { return p.x < 1e-250 ? 0.0 : f(p); };
    total += adaptive_quad(EndpointIntegrand(g), a, b, 1e-300, fl, rel_opts(1e-11)).value;
  }
  return total;
}

// Discrete convolution for grid_sampled potentials.
class GridConvolution {
 public:
  GridConvolution(const PotentialSpec& V, double c) : V_(V), g_(V.sample_grid), c_(c) {
    const double h = g_.h();
    const double vol = g_.cell_volume();
    // Ball of the same volume as a cell.
    const double unit_ball = sphere_area(g_.d) / g_.d;
    rcell_ = std::pow(vol / unit_ball, 1.0 / g_.d);
    const double sc = std::sqrt(c);
    auto f = [&](const Abscissa& p) { return p.x < 1e-250 ? 0.0 : green_weight(g_.d, p.x); };
    self_ = sphere_area(g_.d) / c * adaptive_quad(f, 0.0, sc * rcell_, 1e-300, {true, false}, rel_opts(1e-11)).value;
    (void)h;
  }

  double kernel(double r) const {
    if (r < rcell_) return self_ / g_.cell_volume();
    return std::pow(c_, 0.5 * (g_.d - 2)) * green_kernel(g_.d, std::sqrt(c_) * r);
  }

  double at(std::span<const double> x) const {
    const long N = g_.points();
    std::vector<double> y(g_.d);
    double s = 0.0;
    for (long k = 0; k < N; ++k) {
      const double v = std::max(0.0, -V_.samples[k]);
      if (v == 0.0) continue;
      g_.coords(k, y);
      double r2 = 0.0;
      for (int a = 0; a < g_.d; ++a) r2 += (x[a] - y[a]) * (x[a] - y[a]);
      s += kernel(std::sqrt(r2)) * v;
    }
    return s * g_.cell_volume();
  }

  double sup() const {
    const long N = g_.points();
    std::vector<double> x(g_.d), best(g_.d);
    double top = 0.0;
    for (long k = 0; k < N; ++k) {
      g_.coords(k, x);
      const double v = at(x);
      if (v > top) {
        top = v;
        best = x;
      }
    }
    if (top == 0.0) return 0.0;
    const double h = g_.h();
    for (int a = 0; a < g_.d; ++a) {
      std::vector<double> p = best;
      auto f = [&](double s) {
        p[a] = s;
        return at(p);
      };
      auto [s, v] = golden_max(f, best[a] - h, best[a] + h, 40);
      if (v > top) {
        top = v;
        best[a] = s;
      }
    }
    return top;
  }

 private:
  const PotentialSpec& V_;
  const GridSpec& g_;
  double c_;
  double rcell_ = 0.0;
  double self_ = 0.0;
};

double norm_for(const DiscretePotential& dv, const GridSpec& grid, BoundNorm kind) {
  if (kind == BoundNorm::L1) return lp_norm(dv.negative_part, grid, 1.0);
  const double n2 = lp_norm(dv.negative_part, grid, 2.0);
  return n2 * n2;
}

std::string theorem_name(const char* l1, const char* l2, BoundNorm kind) { return kind == BoundNorm::L1 ? l1 : l2; }

void require_gamma_hs(double gamma, const char* what) {
  if (!(gamma > 2.0)) {
    std::ostringstream m;
    m << what << ": requires gamma > 2 (C_HS(gamma) is finite only there), got " << gamma;
    throw DomainError(m.str());
  }
}

// C_HS·prefactor·2^δ(2δ+1)^{δ+1/2}δ^{−δ}(e/(2δα))^{δα}.
double kappa(int d, double gamma, double alpha, double delta, BoundNorm kind) {
  const double dl = std::log(2.0) * delta + (delta + 0.5) * std::log(2.0 * delta + 1.0) - delta * std::log(delta) +
                    delta * alpha * (1.0 - std::log(2.0 * delta * alpha));
  return constant_hs(gamma) * semigroup_prefactor(d, kind) * std::exp(dl);
}

}  // namespace

double sphere_area(int d) {
  if (d < 1) throw DomainError("sphere_area: d must be >= 1");
  return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double green_kernel(int d, double x_norm) {
  if (d < 1 || d > 11) throw DomainError("green_kernel: d must be in 1..11");
  if (!(x_norm > 0.0)) throw DomainError("green_kernel: |x| must be > 0 (the kernel is singular at the origin)");
  const double nu = 0.5 * d - 1.0;
  return std::pow(2.0 * pi, -0.5 * d) * bessel_k(std::abs(nu), x_norm) * std::pow(x_norm, -nu);
}

double beta_of_c(const PotentialSpec& V, double c) {
  if (!(c > 0.0)) throw DomainError("beta_of_c: c must be > 0");
  V.validate();
  if (!V.is_radial()) return GridConvolution(V, c).sup();
  if (V.amplitude <= 0.0) return 0.0;
  const int d = V.d;
  auto f = [&](const Abscissa& p) { return green_weight(d, p.x) * scaled_profile(V, c, p.x); };
  const double edge = std::sqrt(c) * V.radius;
  std::vector<double> cuts{edge};
  if (V.kind == PotentialKind::gaussian_well) cuts = {edge, 8.0 * edge};
  return sphere_area(d) / c * radial_integral(f, cuts, true);
}

double resolvent_potential_at(const PotentialSpec& V, double c, double x_norm) {
  require_radial(V, "resolvent_potential_at");
  if (!(c > 0.0)) throw DomainError("resolvent_potential_at: c must be > 0");
  if (x_norm == 0.0) return beta_of_c(V, c);
  if (V.amplitude <= 0.0) return 0.0;
  const int d = V.d;
  const double X = std::sqrt(c) * x_norm;
  auto f = [&](const Abscissa& p) {
    return spherical_mean_green(d, X, p.x) * std::pow(p.x, d - 1) * scaled_profile(V, c, p.x);
  };
  const double edge = std::sqrt(c) * V.radius;
  std::vector<double> cuts{edge, X};
  if (V.kind == PotentialKind::gaussian_well) cuts.push_back(8.0 * edge + X);
  const double S = d == 1 ? 2.0 : sphere_area(d);
  return S / c * radial_integral(f, cuts, true);
}

KalphaResult kalpha_norm(const PotentialSpec& V, double alpha, const KalphaOptions& opts) {
  if (!(alpha > 0.0)) throw DomainError("kalpha_norm: alpha must be > 0");
  V.validate();
  const double R = V.support_radius();
  const double lo = opts.c_min > 0.0 ? opts.c_min : 1e-6 / (R * R);
  const double hi = opts.c_max > 0.0 ? opts.c_max : 1e8 / (R * R);
  if (!(hi > lo)) throw DomainError("kalpha_norm: empty c range");
  const int n = std::max(3, opts.scan_points);
  auto g = [&](double lc) {
    const double c = std::exp(lc);
    return std::exp(alpha * lc) * beta_of_c(V, c);
  };
  const double l0 = std::log(lo), l1 = std::log(hi), step = (l1 - l0) / (n - 1);
  int arg = 0;
  double top = -1.0;
  for (int i = 0; i < n; ++i) {
    const double v = g(l0 + i * step);
    if (v > top) {
      top = v;
      arg = i;
    }
  }
  KalphaResult r;
  r.value = top;
  r.c_at_sup = std::exp(l0 + arg * step);
  if (top == 0.0) return r;
  r.at_boundary = arg == 0 || arg == n - 1;
  const double a = l0 + std::max(0, arg - 1) * step, b = l0 + std::min(n - 1, arg + 1) * step;
  auto [lc, v] = golden_max(g, a, b, 60);
  if (v > r.value) {
    r.value = v;
    r.c_at_sup = std::exp(lc);
  }
  if (r.at_boundary && opts.require_interior) {
    std::ostringstream m;
    m << "kalpha_norm: the supremum over c in [" << lo << ", " << hi << "] sits at the range boundary (c = "
      << r.c_at_sup << "); the norm may be larger or infinite";
    throw DomainError(m.str());
  }
  return r;
}

double cdp_constant(int d, double p) {
  if (d < 3) throw DomainError("cdp_constant: requires d >= 3");
  if (!(p > 0.5 * d)) {
    std::ostringstream m;
    m << "cdp_constant: requires p > d/2 = " << 0.5 * d << ", got " << p;
    throw DomainError(m.str());
  }
  const double q = p / (p - 1.0);
  const double nu = 0.5 * d - 1.0;
  auto f = [&](const Abscissa& x) {
    const double lg = -0.5 * d * std::log(2.0 * pi) + std::log(bessel_k(nu, x.x)) - nu * std::log(x.x);
    return std::exp(q * lg + (d - 1) * std::log(x.x));
  };
  const double I = radial_integral(f, {1.0}, true);
  return std::pow(sphere_area(d) * I, 1.0 / q);
}

double kalpha_from_powerlaw(double A, double eta, int d) {
  if (!(eta > 0.0 && eta < 2.0)) throw DomainError("kalpha_from_powerlaw: eta must lie in (0, 2)");
  if (!(eta < d)) throw DomainError("kalpha_from_powerlaw: eta must be < d");
  if (!(A >= 0.0)) throw DomainError("kalpha_from_powerlaw: A must be >= 0");
  return std::pow(pi, -0.5 * d) * std::pow(2.0, -eta - 1.0) * gamma_fn(1.0 - 0.5 * eta) *
         gamma_fn(0.5 * (d - eta)) * A;
}

double semiclassical_lt_constant(int d, double gamma) {
  return gamma_fn(gamma + 1.0) / (std::pow(4.0 * pi, 0.5 * d) * gamma_fn(gamma + 0.5 * d + 1.0));
}

double semigroup_prefactor(int d, BoundNorm kind) {
  return std::pow(2.0, 0.25 * d + (kind == BoundNorm::L1 ? 1.0 : 0.0)) / std::pow(8.0 * pi, 0.5 * d);
}

double semigroup_exponent(int d, double gamma, BoundNorm kind) {
  return gamma + 0.5 * d - (kind == BoundNorm::L1 ? 1.0 : 2.0);
}

double t_minimum_closed_form(double c, double m) { return std::pow(std::exp(1.0) * c / (2.0 * m), m); }

double c_minimum_closed_form(double delta, double K) {
  return std::exp(delta * std::log(2.0) + (delta + 0.5) * std::log(2.0 * delta + 1.0) - delta * std::log(delta) +
                  delta * std::log(K));
}

PotentialBound bound_semigroup(const PotentialSpec& V, const GridSpec& grid, double gamma, std::optional<double> c,
                               BoundNorm kind) {
  require_gamma_hs(gamma, "bound_semigroup");
  const auto dv = discretize(V, grid);
  PotentialBound b;
  b.theorem = theorem_name("mapw", "mapw2", kind);
  const int d = V.d;
  const double m = semigroup_exponent(d, gamma, kind);
  if (!(m > 0.0)) throw DomainError("bound_semigroup: exponent gamma + d/2 - 2 must be > 0");
  b.norm_L1 = lp_norm(dv.negative_part, grid, 1.0);
  b.norm_L2 = lp_norm(dv.negative_part, grid, 2.0);
  const double norm = norm_for(dv, grid, kind);
  const double pre = constant_hs(gamma) * semigroup_prefactor(d, kind);
  auto eval = [&](double cc, double beta) {
    return pre * t_minimum_closed_form(cc, m) / std::sqrt(1.0 - 4.0 * beta) * norm;
  };
  if (norm == 0.0) {
    b.value = 0.0;
    b.c = c.value_or(std::numeric_limits<double>::quiet_NaN());
    b.beta = 0.0;
    b.c_choice = c ? "given" : "none needed";
    return b;
  }
  if (c) {
    const double beta = beta_of_c(V, *c);
    if (!(4.0 * beta < 1.0)) {
      std::ostringstream m2;
      m2 << "bound_semigroup: 4*beta(c) = " << 4.0 * beta << " >= 1 at c = " << *c;
      throw HypothesisError(m2.str());
    }
    b.c = *c;
    b.beta = beta;
    b.value = eval(*c, beta);
    b.c_choice = "given";
  } else {
    const double R = V.support_radius();
    double c0 = 1e-8 / (R * R);
    int k = 0;
    while (!(4.0 * beta_of_c(V, c0) < 1.0)) {
      if (++k > 200)
        throw DomainError(
            "bound_semigroup: no c with 4*beta(c) < 1 found after 200 doublings; beta(c) -> 0 as c -> infinity, so "
            "the c range must be enlarged");
      c0 *= 2.0;
    }
    const int n = 241;
    const double l0 = std::log(c0), l1 = std::log(1e6 * c0), step = (l1 - l0) / (n - 1);
    auto f = [&](double lc) {
      const double cc = std::exp(lc);
      const double beta = beta_of_c(V, cc);
      if (!(4.0 * beta < 1.0)) return -inf;
      return -std::log(eval(cc, beta));
    };
    int arg = 0;
    double best = -inf;
    for (int i = 0; i < n; ++i) {
      const double v = f(l0 + i * step);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    double lc = l0 + arg * step;
    auto [lr, vr] = golden_max(f, l0 + std::max(0, arg - 1) * step, l0 + std::min(n - 1, arg + 1) * step, 60);
    if (vr > best) lc = lr;
    b.c = std::exp(lc);
    b.beta = beta_of_c(V, b.c);
    b.value = eval(b.c, b.beta);
    b.c_choice = "scan-minimized";
  }
  b.t = 2.0 * m / b.c;
  return b;
}

namespace {

PotentialBound assemble_kalpha(const PotentialSpec& V, const GridSpec& grid, double gamma, double alpha,
                               BoundNorm kind, double K, PotentialBound b) {
  const auto dv = discretize(V, grid);
  const int d = V.d;
  const double m = semigroup_exponent(d, gamma, kind);
  if (!(m > 0.0)) throw DomainError("bound: exponent gamma + d/2 - 2 must be > 0");
  b.alpha = alpha;
  b.delta = m / alpha;
  b.kappa = kappa(d, gamma, alpha, b.delta, kind);
  b.norm_L1 = lp_norm(dv.negative_part, grid, 1.0);
  b.norm_L2 = lp_norm(dv.negative_part, grid, 2.0);
  b.norm_Kalpha = K;
  const double norm = norm_for(dv, grid, kind);
  b.value = norm == 0.0 || K == 0.0 ? 0.0 : b.kappa * norm * std::pow(K, b.delta);
  if (K > 0.0) {
    b.c = std::pow(4.0 * K * (2.0 * b.delta + 1.0) / (2.0 * b.delta), 1.0 / alpha);
    b.t = 2.0 * m / b.c;
  }
  b.c_choice = "closed-form minimizer";
  return b;
}

}  // namespace

PotentialBound bound_kalpha(const PotentialSpec& V, const GridSpec& grid, double gamma, double alpha, BoundNorm kind,
                            const KalphaOptions& opts) {
  require_gamma_hs(gamma, "bound_kalpha");
  if (!(alpha > 0.0)) throw DomainError("bound_kalpha: alpha must be > 0");
  const auto K = kalpha_norm(V, alpha, opts);
  PotentialBound b;
  b.theorem = theorem_name("cov2", "corv22", kind);
  b.kalpha_source = "numeric sup over c";
  b.kalpha_at_boundary = K.at_boundary;
  return assemble_kalpha(V, grid, gamma, alpha, kind, K.value, b);
}

PotentialBound bound_lp(const PotentialSpec& V, const GridSpec& grid, double gamma, double p, BoundNorm kind) {
  if (V.d < 3) {
    std::ostringstream m;
    m << "bound_lp: the L^p to K^alpha embedding requires d >= 3, got d = " << V.d;
    throw DomainError(m.str());
  }
  require_gamma_hs(gamma, "bound_lp");
  if (!(p > 0.5 * V.d)) {
    std::ostringstream m;
    m << "bound_lp: requires p > d/2 = " << 0.5 * V.d << ", got " << p;
    throw DomainError(m.str());
  }
  const auto dv = discretize(V, grid);
  PotentialBound b;
  b.theorem = theorem_name("cor2", "cor22", kind);
  b.p = p;
  b.norm_Lp = lp_norm(dv.negative_part, grid, p);
  b.kalpha_source = "C_{d,p} * L^p norm";
  const double K = cdp_constant(V.d, p) * b.norm_Lp;
  return assemble_kalpha(V, grid, gamma, 1.0 - 0.5 * V.d / p, kind, K, b);
}

double lieb_thirring_rhs(const PotentialSpec& V, const GridSpec& grid, double gamma, double C) {
  const int d = V.d;
  const bool ok = (d >= 3 && gamma >= 0.0) || (d == 2 && gamma > 0.0) || (d == 1 && gamma >= 0.5);
  if (!ok) {
    std::ostringstream m;
    m << "lieb_thirring_rhs: gamma = " << gamma << " outside the validity range for d = " << d
      << " (gamma >= 1/2 in d=1, > 0 in d=2, >= 0 in d>=3)";
    throw DomainError(m.str());
  }
  if (!(C > 0.0)) throw DomainError("lieb_thirring_rhs: constant must be > 0");
  const auto dv = discretize(V, grid);
  const double q = gamma + 0.5 * d;
  double s = 0.0;
  for (Eigen::Index k = 0; k < dv.negative_part.size(); ++k) s += std::pow(-dv.negative_part[k], q);
  return C * grid.cell_volume() * s;
}

double radial_lp_norm(const PotentialSpec& V, double p) {
  require_radial(V, "radial_lp_norm");
  if (!(p >= 1.0)) throw DomainError("radial_lp_norm: p must be >= 1");
  if (V.amplitude <= 0.0) return 0.0;
  const int d = V.d;
  auto f = [&](const Abscissa& x) { return std::pow(V.radial_negative_part(x.x), p) * std::pow(x.x, d - 1); };
  std::vector<double> cuts{V.radius};
  if (V.kind == PotentialKind::gaussian_well) cuts.push_back(8.0 * V.radius);
  const double S = d == 1 ? 2.0 : sphere_area(d);
  return std::pow(S * radial_integral(f, cuts, true), 1.0 / p);
}

double negative_spectrum_moment(const SymmetricOperator& H, double gamma) { return negative_moment_oracle(H, gamma); }

SymmetricOperator schrodinger_operator(const PotentialSpec& V, const GridSpec& grid, long max_points) {
  return laplacian_matrix(grid, max_points) + discretize(V, grid).diagonal();
}

BoundReport bound_report(const PotentialSpec& V, const GridSpec& grid, double gamma, const ReportOptions& opts) {
  BoundReport r;
  r.gamma = gamma;
  r.slack = opts.slack;
  const auto A = laplacian_matrix(grid, opts.max_points);
  const auto dv = discretize(V, grid);
  r.oracle_moment = negative_spectrum_moment(A + dv.diagonal(), gamma);
  r.oracle_moment_negative_part = negative_spectrum_moment(A + dv.negative_diagonal(), gamma);
  auto add = [&](const char* name, auto&& fn) {
    BoundEntry e;
    try {
      e.bound = fn();
      e.bound.theorem = name;
    } catch (const std::invalid_argument& ex) {
      e.bound.theorem = name;
      e.error = ex.what();
    } catch (const ConvergenceError& ex) {
      e.bound.theorem = name;
      e.error = ex.what();
    }
    if (e.error.empty()) e.violated = e.bound.value < r.oracle_moment * (1.0 - opts.slack);
    r.bounds.push_back(std::move(e));
  };
  add("mapw", [&] { return bound_semigroup(V, grid, gamma, opts.c, BoundNorm::L1); });
  add("mapw2", [&] { return bound_semigroup(V, grid, gamma, opts.c, BoundNorm::L2); });
  if (opts.alpha) {
    add("cov2", [&] { return bound_kalpha(V, grid, gamma, *opts.alpha, BoundNorm::L1, opts.kalpha); });
    add("corv22", [&] { return bound_kalpha(V, grid, gamma, *opts.alpha, BoundNorm::L2, opts.kalpha); });
  }
  if (opts.p) {
    add("cor2", [&] { return bound_lp(V, grid, gamma, *opts.p, BoundNorm::L1); });
    add("cor22", [&] { return bound_lp(V, grid, gamma, *opts.p, BoundNorm::L2); });
  }
  r.lt_constant = opts.lt_constant;
  r.lt_semiclassical = opts.lt_semiclassical;
  if (opts.lt_semiclassical) r.lt_constant = semiclassical_lt_constant(V.d, gamma);
  try {
    r.lieb_thirring = lieb_thirring_rhs(V, grid, gamma, r.lt_constant);
  } catch (const DomainError& ex) {
    r.lt_error = ex.what();
  }
  return r;
}

bool BoundReport::ok() const {
  if (oracle_moment > oracle_moment_negative_part * (1.0 + 1e-12) + 1e-300) return false;
  return std::none_of(bounds.begin(), bounds.end(), [](const BoundEntry& e) { return e.violated; });
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("least_squares_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DomainError("least_squares_slope: x values are all equal");
  return (n * sxy - sx * sy) / den;
}

MuScanRow mu_scan_row(const PotentialSpec& W, const GridSpec& grid, double gamma, double p, double mu,
                      double lt_constant, bool with_oracle, long max_points) {
  const PotentialSpec V = W.scaled(mu, gamma);
  const GridSpec g{grid.d, grid.L / mu, grid.n};
  const auto b = bound_lp(V, g, gamma, p, BoundNorm::L1);
  MuScanRow row;
  row.mu = mu;
  row.our_bound = b.value;
  row.norm_L1 = b.norm_L1;
  row.norm_Lp = b.norm_Lp;
  row.lt_rhs = lieb_thirring_rhs(V, g, gamma, lt_constant);
  if (with_oracle && g.points() <= max_points)
    row.oracle_moment = negative_spectrum_moment(schrodinger_operator(V, g, max_points), gamma);
  return row;
}

MuScanResult summarize_mu_scan(std::vector<MuScanRow> rows, int d, double gamma, double p) {
  MuScanResult r;
  r.rows = std::move(rows);
  const double delta = (gamma + 0.5 * d - 1.0) / (1.0 - 0.5 * d / p);
  r.expected_slope = -2.0 * d * delta / ((2.0 * gamma + d) * p);
  const double s = d / (gamma + 0.5 * d);
  r.scaling_law_slope = (s - d) + delta * (s - d / p);
  std::vector<double> lx, lo, ll;
  int sign = 0;
  for (const auto& row : r.rows) {
    if (row.our_bound > 0.0 && row.lt_rhs > 0.0) {
      lx.push_back(std::log(row.mu));
      lo.push_back(std::log(row.our_bound));
      ll.push_back(std::log(row.lt_rhs));
    }
    const int s = row.our_bound > row.lt_rhs ? 1 : (row.our_bound < row.lt_rhs ? -1 : 0);
    if (s != 0 && sign != 0 && s != sign) r.curves_cross = true;
    if (s != 0) sign = s;
  }
  if (lx.size() >= 2) {
    r.slope_our = least_squares_slope(lx, lo);
    r.slope_lt = least_squares_slope(lx, ll);
  } else {
    r.slope_our = r.slope_lt = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

MuScanResult mu_scaling_scan(const PotentialSpec& W, const GridSpec& grid, double gamma, double p,
                             const std::vector<double>& mu_grid, double lt_constant, bool with_oracle,
                             long max_points) {
  std::vector<MuScanRow> rows;
  for (double mu : mu_grid) rows.push_back(mu_scan_row(W, grid, gamma, p, mu, lt_constant, with_oracle, max_points));
  return summarize_mu_scan(std::move(rows), W.d, gamma, p);
}

bool BridgeReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const BridgeRow& r) { return r.identity_ok && r.bounds_ok; });
}

BridgeReport end_to_end_matrix_check(const PotentialSpec& V, const GridSpec& grid, double gamma,
                                     const std::vector<double>& t_grid, double tol) {
  if (grid.points() > 2000) {
    std::ostringstream m;
    m << "end_to_end_matrix_check: " << grid.points() << " grid points; dense determinant work is limited to 2000";
    throw DomainError(m.str());
  }
  const auto A = laplacian_matrix(grid);
  const auto B = A + discretize(V, grid).negative_diagonal();
  BridgeReport rep;
  rep.gamma = gamma;
  const double oracle = negative_moment_oracle(B, gamma);
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("end_to_end_matrix_check: t must be > 0");
    const auto pair = make_pair(A, B, t);
    BridgeRow row;
    row.t = t;
    row.oracle = oracle;
    row.oracle_scaled = std::pow(t, gamma) * oracle;
    row.jensen = moment_via_jensen_tr(pair, {gamma, tol}).value;
    row.residual = std::abs(row.jensen - row.oracle_scaled);
    row.residual_tol = std::max(1e-6, 1e-4 * row.oracle_scaled);
    row.identity_ok = row.residual <= row.residual_tol;
    const double floor = oracle * (1.0 - 1e-9);
    row.bound_exp = bound_exp(pair, gamma).bound;
    row.bounds_ok = row.bound_exp >= floor;
    if (gamma > 2.0) {
      row.bound_exphs = bound_exphs(pair, gamma).bound;
      row.bounds_ok = row.bounds_ok && *row.bound_exphs >= floor;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace semibound
