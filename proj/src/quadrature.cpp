#include "semibound/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "semibound/error.hpp"

namespace semibound {

namespace {

constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss 7-point weights, matching xgk[1], xgk[3], xgk[5], xgk[7].
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double eps = std::numeric_limits<double>::epsilon();

// A parametrized piece of the integration range. Parameter p runs over
// [0, 1] for the substituted pieces and over [a, b] for the plain piece.
struct Segment {
  enum Kind { plain, left_exp, right_exp } kind;
  double a;      // original interval
  double b;
  double w;      // width of the substituted piece
  double p0, p1;
};

struct Panel {
  int seg;
  double lo, hi;
  double value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

class Integrator {
 public:
  Integrator(const EndpointIntegrand& f, std::vector<Segment> segs) : f_(f), segs_(std::move(segs)) {}

  // Value of the integrand in parameter coordinates, Jacobian included.
  double eval(const Segment& s, double p) const {
    switch (s.kind) {
      case Segment::plain:
        return f_({p, p - s.a, s.b - p});
      case Segment::left_exp:
      case Segment::right_exp: {
        if (p >= 1.0) return 0.0;
        const double u = p / (1.0 - p);
        const double e = std::exp(-u);
        const double dist = s.w * e;
        if (dist == 0.0) return 0.0;
        const double jac = dist / ((1.0 - p) * (1.0 - p));
        if (!std::isfinite(jac)) return 0.0;
        const double far = (s.b - s.a) == s.w ? -s.w * std::expm1(-u) : (s.b - s.a) - dist;
        const double v = s.kind == Segment::left_exp ? f_({s.a + dist, dist, far}) : f_({s.b - dist, far, dist});
        return v == 0.0 ? 0.0 : v * jac;
      }
    }
    return 0.0;
  }

  Panel gk15(int seg, double lo, double hi) const {
    const Segment& s = segs_[static_cast<std::size_t>(seg)];
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::array<double, 15> fv{};
    fv[7] = eval(s, c);
    for (int j = 0; j < 7; ++j) {
      fv[j] = eval(s, c - h * xgk[j]);
      fv[14 - j] = eval(s, c + h * xgk[j]);
    }
    double rk = wgk[7] * fv[7];
    double rg = wg[3] * fv[7];
    double rabs = std::abs(rk);
    for (int j = 0; j < 7; ++j) {
      const double pair = fv[j] + fv[14 - j];
      rk += wgk[j] * pair;
      rabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
      if (j % 2 == 1) rg += wg[j / 2] * pair;
    }
    const double mean = 0.5 * rk;
    double rasc = wgk[7] * std::abs(fv[7] - mean);
    for (int j = 0; j < 7; ++j) rasc += wgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    double err = std::abs((rk - rg) * h);
    rasc *= std::abs(h);
    rabs *= std::abs(h);
    if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
    if (rabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * rabs, err);
    if (!std::isfinite(rk * h)) {
      std::ostringstream m;
      m << "adaptive_quad: non-finite integrand on [" << lo << ", " << hi << "]";
      throw ConvergenceError(m.str(), std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::infinity());
    }
    return {seg, lo, hi, rk * h, err};
  }

  QuadResult run(double tol, const QuadOptions& opts) {
    std::priority_queue<Panel> heap;
    std::vector<Panel> frozen;
    for (std::size_t i = 0; i < segs_.size(); ++i)
      heap.push(gk15(static_cast<int>(i), segs_[i].p0, segs_[i].p1));
    int panels = static_cast<int>(heap.size());

    auto totals = [&](double& val, double& err) {
      // Summed in a fixed order for reproducibility.
      std::vector<Panel> all = frozen;
      auto copy = heap;
      while (!copy.empty()) {
        all.push_back(copy.top());
        copy.pop();
      }
      std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
        return x.seg != y.seg ? x.seg < y.seg : x.lo < y.lo;
      });
      val = 0.0;
      err = 0.0;
      for (const auto& p : all) {
        val += p.value;
        err += p.err;
      }
    };

    double val = 0.0;
    double err = 0.0;
    {
      auto copy = heap;
      while (!copy.empty()) {
        val += copy.top().value;
        err += copy.top().err;
        copy.pop();
      }
    }
    while (true) {
      if (err <= std::max(tol, opts.rel_tol * std::abs(val))) break;
      if (heap.empty()) break;
      if (panels >= opts.max_panels) {
        totals(val, err);
        std::ostringstream m;
        m << "adaptive_quad: panel budget " << opts.max_panels << " exhausted (estimate " << val << ", error "
          << err << ", tol " << tol << ")";
        throw ConvergenceError(m.str(), val, err);
      }
      Panel worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.lo + worst.hi);
      if (!(mid > worst.lo && mid < worst.hi) ||
          (worst.hi - worst.lo) < 64 * eps * std::max(std::abs(worst.lo), std::abs(worst.hi))) {
        frozen.push_back(worst);
        continue;
      }
      Panel l = gk15(worst.seg, worst.lo, mid);
      Panel r = gk15(worst.seg, mid, worst.hi);
      val += l.value + r.value - worst.value;
      err += l.err + r.err - worst.err;
      heap.push(l);
      heap.push(r);
      ++panels;
    }
    totals(val, err);
    return {val, err, panels};
  }

 private:
  const EndpointIntegrand& f_;
  std::vector<Segment> segs_;
};

std::vector<Segment> build_segments(double a, double b, EndpointFlags flags) {
  std::vector<Segment> segs;
  const double w = b - a;
  if (flags.left && flags.right) {
    segs.push_back({Segment::left_exp, a, b, 0.5 * w, 0.0, 1.0});
    segs.push_back({Segment::right_exp, a, b, 0.5 * w, 0.0, 1.0});
  } else if (flags.left) {
    segs.push_back({Segment::left_exp, a, b, w, 0.0, 1.0});
  } else if (flags.right) {
    segs.push_back({Segment::right_exp, a, b, w, 0.0, 1.0});
  } else {
    segs.push_back({Segment::plain, a, b, w, a, b});
  }
  return segs;
}

}  // namespace

QuadResult adaptive_quad(const EndpointIntegrand& f, double a, double b, double tol, EndpointFlags flags,
                         const QuadOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("adaptive_quad: tol must be > 0");
  if (std::isnan(a) || std::isnan(b) || !(a < b)) throw DomainError("adaptive_quad: requires a < b");
  if (std::isinf(a)) throw DomainError("adaptive_quad: left endpoint must be finite");
  if (std::isinf(b)) {
    // x = a + q/(1 − q), q ∈ [0, 1).
    EndpointIntegrand g = [&f, a](const Abscissa& q) {
      if (q.from_right <= 0.0) return 0.0;
      const double om = q.from_right;
      const double dx = q.from_left / om;
      if (!std::isfinite(a + dx)) return 0.0;
      const double v = f({a + dx, dx, std::numeric_limits<double>::infinity()});
      // A NaN far out (inf/inf, 0·inf) is an integrand formula breaking down
      // where its true value has long underflowed. +-inf is left to fail.
      if (std::isnan(v) && dx > 1e50) return 0.0;
      return v == 0.0 ? 0.0 : v / om / om;
    };
    Integrator in(g, build_segments(0.0, 1.0, {flags.left, true}));
    return in.run(tol, opts);
  }
  Integrator in(f, build_segments(a, b, flags));
  return in.run(tol, opts);
}

QuadResult adaptive_quad(const Integrand& f, double a, double b, double tol, EndpointFlags flags,
                         const QuadOptions& opts) {
  EndpointIntegrand g = [&f](const Abscissa& p) { return f(p.x); };
  return adaptive_quad(g, a, b, tol, flags, opts);
}

namespace {

// θ(τ) = 2π(τ − sin(4πτ)/(4π)) = (x − sin x)/2 with x = 4πτ.
double graded_theta(double tau) {
  const double x = 4.0 * std::numbers::pi * tau;
  if (x < 0.25) {
    const double x2 = x * x;
    return 0.5 * x * x2 * (1.0 / 6 - x2 * (1.0 / 120 - x2 * (1.0 / 5040 - x2 / 362880)));
  }
  return 0.5 * (x - std::sin(x));
}

double graded_weight(double tau) {
  const double s = std::sin(2.0 * std::numbers::pi * tau);
  return 2.0 * s * s;
}

}  // namespace

PeriodicMeanResult even_periodic_mean(const std::function<double(double)>& f, double tol, int initial_nodes,
                                      int max_nodes) {
  if (initial_nodes < 4 || initial_nodes % 2) throw DomainError("even_periodic_mean: initial_nodes must be even >= 4");
  int n = initial_nodes;
  double sum = 0.0;
  for (int k = 1; k < n / 2; ++k) {
    const double tau = static_cast<double>(k) / n;
    sum += f(graded_theta(tau)) * graded_weight(tau);
  }
  double est = 2.0 * sum / n;
  PeriodicMeanResult res{est, std::numeric_limits<double>::infinity(), n, false};
  while (2 * n <= max_nodes) {
    const int n2 = 2 * n;
    double add = 0.0;
    for (int k = 1; k < n2 / 2; k += 2) {
      const double tau = static_cast<double>(k) / n2;
      add += f(graded_theta(tau)) * graded_weight(tau);
    }
    sum += add;
    const double next = 2.0 * sum / n2;
    res = {next, std::abs(next - est), n2, std::abs(next - est) < 0.25 * tol};
    n = n2;
    est = next;
    if (res.converged) break;
  }
  return res;
}

PeriodicMeanResult periodic_mean(const std::function<double(double)>& f, double tol, int initial_nodes,
                                 int max_nodes) {
  if (initial_nodes < 1) throw DomainError("periodic_mean: initial_nodes must be >= 1");
  int n = initial_nodes;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += f(2.0 * std::numbers::pi * k / n);
  double est = sum / n;
  PeriodicMeanResult res{est, std::numeric_limits<double>::infinity(), n, false};
  while (2 * n <= max_nodes) {
    for (int k = 1; k < 2 * n; k += 2) sum += f(std::numbers::pi * k / n);
    n *= 2;
    const double next = sum / n;
    res = {next, std::abs(next - est), n, std::abs(next - est) < 0.25 * tol};
    est = next;
    if (res.converged) break;
  }
  return res;
}

}  // namespace semibound
