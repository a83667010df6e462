#include "semibound/constants.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <tuple>
#include <utility>

#include "semibound/error.hpp"
#include "semibound/quadrature.hpp"
#include "semibound/specfun.hpp"

namespace semibound {

namespace {

using std::numbers::pi;

void require(bool ok, int index, double gamma, const char* cond) {
  if (ok) return;
  std::ostringstream m;
  m << "c" << index << "(gamma): the integral is finite only for " << cond << ", got gamma = " << gamma;
  throw DomainError(m.str());
}

// |log r| from the exact endpoint distances of r ∈ (0, 1).
double abs_log(const Abscissa& p) { return p.from_left < 0.5 ? -std::log(p.from_left) : -std::log1p(-p.from_right); }

double log_weight(const Abscissa& p, double gamma) { return std::pow(abs_log(p), gamma - 2.0); }

QuadOptions constant_opts() {
  QuadOptions o;
  o.rel_tol = 0.0;
  o.max_panels = 4000;
  return o;
}

// ∫₀^{arccos r} dθ / √((1−r)² + 4r sin²(θ/2)), r ∈ (0, 1), with δ = 1 − r.
double c1_inner(double r, double delta, double tol) {
  const double top = 2.0 * std::asin(std::sqrt(0.5 * delta));  // arccos(r)
  if (r < 0.5) {
    auto f = [&](double th) {
      const double s = std::sin(0.5 * th);
      return 1.0 / std::sqrt(delta * delta + 4.0 * r * s * s);
    };
    return adaptive_quad(Integrand(f), 0.0, top, tol, {}, constant_opts()).value;
  }
  // θ = ε sinh v with ε = δ/√r straightens the peak of width ~δ at θ = 0;
  // the integrand becomes cosh v / (√r·√(1 + sinh²v·sinc²(θ/2))).
  const double eps = delta / std::sqrt(r);
  const double vmax = std::asinh(top / eps);
  const double rs = 1.0 / std::sqrt(r);
  auto f = [&](double v) {
    const double sh = std::sinh(v);
    const double half = 0.5 * eps * sh;
    const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
    return rs * std::cosh(v) / std::sqrt(1.0 + sh * sh * sinc * sinc);
  };
  return adaptive_quad(Integrand(f), 0.0, vmax, tol, {}, constant_opts()).value;
}

double c1_exact(double gamma, double tol) {
  auto f = [&](const Abscissa& p) {
    const double w = log_weight(p, gamma);
    if (w == 0.0) return 0.0;
    return w * c1_inner(p.x, p.from_right, 1e-3 * tol);
  };
  return adaptive_quad(EndpointIntegrand(f), 0.0, 1.0, tol, {true, true}, constant_opts()).value;
}

double c2_quad(double gamma, double tol) {
  auto f = [&](const Abscissa& p) {
    const double w = log_weight(p, gamma);
    if (w == 0.0) return 0.0;
    return 0.5 * w * (std::log1p(p.x) - std::log(p.from_right));
  };
  return adaptive_quad(EndpointIntegrand(f), 0.0, 1.0, tol, {true, true}, constant_opts()).value;
}

// The integrand behaves like |log r|^{γ−2}·π/(2(1−r)) at r → 1. That part
// integrates to (π/2)Γ(γ−1)ζ(γ−1); only the remainder, O((1−r)^{γ−5/2}),
// goes to quadrature. Near γ = 2 the full integrand keeps a visible share of
// its mass below 1e-308, out of reach of any double-precision grid.
double c4_quad(double gamma, double tol) {
  auto f = [&](const Abscissa& p) {
    const double w = log_weight(p, gamma);
    if (w == 0.0) return 0.0;
    const double r = p.x;
    const double d = p.from_right;
    const double ix = std::sqrt(d / (1.0 + r));
    const double rem = -std::atan(ix) / d - std::atan(1.0 / ix) / (1.0 + r);
    return w * rem;
  };
  const double head = 0.5 * pi * gamma_fn(gamma - 1.0) * riemann_zeta(gamma - 1.0);
  return head + adaptive_quad(EndpointIntegrand(f), 0.0, 1.0, 1e-2 * tol, {true, true}, constant_opts()).value;
}

double c5_quad(double gamma, double tol) {
  auto f = [&](const Abscissa& p) {
    const double w = log_weight(p, gamma);
    if (w == 0.0) return 0.0;
    const double r = p.x;
    return w * r * r / std::sqrt(p.from_right * (1.0 + r));
  };
  return adaptive_quad(EndpointIntegrand(f), 0.0, 1.0, tol, {true, true}, constant_opts()).value;
}

void check_index(int index, double gamma) {
  switch (index) {
    case 1: case 2: case 3: case 6:
      require(gamma > 1.0, index, gamma, "gamma > 1");
      break;
    case 4:
      require(gamma > 2.0, index, gamma, "gamma > 2");
      break;
    case 5:
      require(gamma > 1.5, index, gamma, "gamma > 3/2");
      break;
    default:
      throw DomainError("c_integral: index must be in 1..6");
  }
}

class Memo {
 public:
  template <class F>
  double get(int which, double gamma, double tol, F compute) {
    const Key k{which, std::llround(gamma * 1e12), tol};
    {
      std::shared_lock lock(mu_);
      if (auto it = table_.find(k); it != table_.end()) return it->second;
    }
    const double v = compute();
    std::unique_lock lock(mu_);
    return table_.emplace(k, v).first->second;
  }

 private:
  using Key = std::tuple<int, long long, double>;
  std::shared_mutex mu_;
  std::map<Key, double> table_;
};

Memo& memo() {
  static Memo m;
  return m;
}

}  // namespace

double c_integral(int index, double gamma, double tol) {
  check_index(index, gamma);
  if (!(tol > 0.0)) throw DomainError("c_integral: tol must be > 0");
  switch (index) {
    case 1: return memo().get(1, gamma, tol, [&] { return c1_exact(gamma, tol); });
    case 2: return memo().get(2, gamma, tol, [&] { return c2_quad(gamma, tol); });
    case 3: return 0.5 * pi * gamma_fn(gamma - 1.0);
    case 4: return memo().get(4, gamma, tol, [&] { return c4_quad(gamma, tol); });
    case 5: return memo().get(5, gamma, tol, [&] { return c5_quad(gamma, tol); });
    case 6: return pi * std::pow(2.0, -gamma) * gamma_fn(gamma - 1.0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double c_integral_quadrature(int index, double gamma, double tol) {
  check_index(index, gamma);
  if (index != 3 && index != 6) return c_integral(index, gamma, tol);
  // (π/2)∫₀^∞ x^{γ−2} e^{−kx} dx with k = 1 (c₃) or k = 2 (c₆).
  const double k = index == 3 ? 1.0 : 2.0;
  auto f = [&](const Abscissa& p) {
    if (gamma == 2.0) return std::exp(-k * p.x);
    if (p.from_left == 0.0) return gamma > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::exp((gamma - 2.0) * std::log(p.from_left) - k * p.x);
  };
  const double scale = 0.5 * pi;
  return scale * adaptive_quad(EndpointIntegrand(f), 0.0, std::numeric_limits<double>::infinity(), 1e-3 * tol,
                               {true, false}, constant_opts())
                     .value;
}

double c1_log_majorant(double gamma, double tol) {
  require(gamma > 1.0, 1, gamma, "gamma > 1");
  auto f = [&](const Abscissa& p) {
    const double s = p.x;
    const double sm1 = p.from_left;
    const double ls = std::log1p(sm1);
    if (ls == 0.0) return 0.0;
    // Written in 1/s to stay finite for large s.
    const double u = 1.0 / s;
    const double log_num = std::log(s) + std::log(std::sqrt(1.0 + u) + std::sqrt(1.0 + u * u));
    return std::pow(ls, gamma - 2.0) * u * u / std::sqrt(1.0 + u * u) * (2.0 * log_num - std::log(sm1));
  };
  return memo().get(7, gamma, tol, [&] {
    return adaptive_quad(EndpointIntegrand(f), 1.0, std::numeric_limits<double>::infinity(), tol, {true, false},
                         constant_opts())
        .value;
  });
}

double constant_tr(double gamma, double tol) {
  if (!(gamma > 1.0)) {
    std::ostringstream m;
    m << "constant_tr: requires gamma > 1, got " << gamma;
    throw DomainError(m.str());
  }
  return memo().get(8, gamma, tol, [&] {
    const double s = c_integral(1, gamma, tol) + c_integral(2, gamma, tol) + c_integral(3, gamma, tol);
    return gamma * (gamma - 1.0) / pi * s;
  });
}

double constant_hs(double gamma, double tol) {
  if (!(gamma > 2.0)) {
    std::ostringstream m;
    m << "constant_hs: requires gamma > 2 (c4 diverges at gamma <= 2), got " << gamma;
    throw DomainError(m.str());
  }
  return memo().get(9, gamma, tol, [&] {
    const double s = c_integral(4, gamma, tol) + c_integral(5, gamma, tol) + c_integral(6, gamma, tol);
    return gamma * (gamma - 1.0) / pi * s;
  });
}

double prim_constant(double gamma) {
  if (!(gamma > 2.0)) {
    std::ostringstream m;
    m << "prim_constant: requires gamma > 2 (zeta(gamma - 1) diverges), got " << gamma;
    throw DomainError(m.str());
  }
  return gamma_fn(gamma + 1.0) * riemann_zeta(gamma - 1.0);
}

double lower_bound_tr(double gamma) {
  if (!(gamma > 1.0)) {
    std::ostringstream m;
    m << "lower_bound_tr: requires gamma > 1, got " << gamma;
    throw DomainError(m.str());
  }
  const double w = lambert_w0(-gamma * std::exp(-gamma));
  return -w * std::pow(gamma + w, gamma - 1.0);
}

GammaConstants gamma_constants(double gamma, double tol) {
  GammaConstants g;
  g.gamma = gamma;
  g.quadrature_tol = tol;
  auto opt = [&](int k) -> std::optional<double> {
    try {
      return c_integral(k, gamma, tol);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  g.c1 = opt(1);
  g.c2 = opt(2);
  g.c3 = opt(3);
  g.c4 = opt(4);
  g.c5 = opt(5);
  g.c6 = opt(6);
  if (gamma > 1.0) {
    g.C_tr = constant_tr(gamma, tol);
    g.lower_bound = lower_bound_tr(gamma);
  }
  if (gamma > 2.0) {
    g.C_HS = constant_hs(gamma, tol);
    g.prim_constant = prim_constant(gamma);
  }
  return g;
}

}  // namespace semibound
