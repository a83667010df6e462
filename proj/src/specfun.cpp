#include "semibound/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "semibound/error.hpp"

namespace semibound {

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    std::ostringstream m;
    m << "gamma_fn: requires x > 0, got " << x;
    throw DomainError(m.str());
  }
  return std::tgamma(x);
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) {
    std::ostringstream m;
    m << "riemann_zeta: requires s > 1, got " << s;
    throw DomainError(m.str());
  }
  // Euler–Maclaurin with N terms and K Bernoulli corrections.
  constexpr int N = 12;
  constexpr std::array<double, 10> b2k = {1.0 / 6,          -1.0 / 30,   1.0 / 42,        -1.0 / 30,
                                          5.0 / 66,         -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,
                                          43867.0 / 798,    -174611.0 / 330};
  double sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double nn = N;
  sum += std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s);
  // term_k = B_2k/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
  double rising = s;           // s(s+1)…(s+2k−2)
  double fact = 2.0;           // (2k)!
  double npow = std::pow(nn, -s - 1.0);
  for (std::size_t k = 1; k <= b2k.size(); ++k) {
    const double term = b2k[k - 1] / fact * rising * npow;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    const double kk = static_cast<double>(k);
    rising *= (s + 2 * kk - 1) * (s + 2 * kk);
    fact *= (2 * kk + 1) * (2 * kk + 2);
    npow /= nn * nn;
  }
  return sum;
}

double lambert_w0(double x) {
  constexpr double em1 = 0.36787944117144233;  // 1/e
  if (std::isnan(x) || x < -em1 - 4 * std::numeric_limits<double>::epsilon()) {
    std::ostringstream m;
    m.precision(17);
    m << "lambert_w0: requires x >= -1/e, got " << x;
    throw DomainError(m.str());
  }
  if (x == 0.0) return 0.0;
  if (x <= -em1) return -1.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.25) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  } else if (x < 3.0) {
    w = std::log1p(x);
    if (x > 0.0) w *= 0.75;
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) return w;
  }
  return w;
}

double bessel_k(double nu, double x) {
  const double twice = 2.0 * nu;
  const double m = std::round(twice);
  if (!(x > 0.0)) throw DomainError("bessel_k: requires x > 0");
  if (std::abs(twice - m) > 1e-12 || m < 0 || m > 9) {
    std::ostringstream s;
    s << "bessel_k: order " << nu << " unsupported (need nu = m/2, 0 <= nu <= 9/2)";
    throw DomainError(s.str());
  }
  const int mi = static_cast<int>(m);
  if (mi % 2 == 1) {
    // K_{n+1/2}(x) = √(π/(2x)) e^{−x} Σ_k (n+k)!/(k!(n−k)!) (2x)^{−k}
    const int n = mi / 2;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= n; ++k) {
      term *= static_cast<double>((n + k) * (n - k + 1)) / (k * 2.0 * x);
      sum += term;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
  }
  const int n = mi / 2;
  if (x > 25.0) {
    // Hankel expansion; at x > 25 the smallest term is far below rounding.
    const double mu = 4.0 * n * n;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
      const double next = term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
      if (std::abs(next) >= std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * sum;
  }
  double k0 = std::cyl_bessel_k(0.0, x);
  if (n == 0) return k0;
  double k1 = std::cyl_bessel_k(1.0, x);
  for (int j = 1; j < n; ++j) {
    const double k2 = k0 + 2.0 * j / x * k1;
    k0 = k1;
    k1 = k2;
  }
  return k1;
}

}  // namespace semibound
