#include "semibound/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semibound/error.hpp"

namespace semibound {

long GridSpec::points() const {
  long p = 1;
  for (int k = 0; k < d; ++k) p *= n;
  return p;
}

double GridSpec::cell_volume() const { return std::pow(h(), d); }

void GridSpec::coords(long k, std::span<double> x) const {
  for (int a = d - 1; a >= 0; --a) {
    x[a] = node(static_cast<int>(k % n));
    k /= n;
  }
}

void GridSpec::validate(int min_n) const {
  std::ostringstream m;
  if (d < 1 || d > 3) m << "grid.d must be 1, 2 or 3, got " << d;
  else if (!(L > 0.0) || !std::isfinite(L)) m << "grid.L must be > 0, got " << L;
  else if (n < min_n) m << "grid.n must be >= " << min_n << ", got " << n;
  if (!m.str().empty()) throw DomainError(m.str());
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::gaussian_well: return "gaussian_well";
    case PotentialKind::power_law_cutoff: return "power_law_cutoff";
    case PotentialKind::grid_sampled: return "grid_sampled";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  for (auto k : {PotentialKind::square_well, PotentialKind::gaussian_well, PotentialKind::power_law_cutoff,
                 PotentialKind::grid_sampled})
    if (to_string(k) == s) return k;
  throw DomainError("unknown potential kind '" + s +
                    "' (expected square_well, gaussian_well, power_law_cutoff or grid_sampled)");
}

void PotentialSpec::validate() const {
  std::ostringstream m;
  if (d < 1 || d > 3) m << "potential.d must be 1, 2 or 3, got " << d;
  else if (!std::isfinite(amplitude)) m << "potential.amplitude must be finite";
  else if (is_radial() && !(radius > 0.0)) m << "potential.radius must be > 0, got " << radius;
  else if (!center.empty() && static_cast<int>(center.size()) != d)
    m << "potential.center must have " << d << " entries, got " << center.size();
  else if (kind == PotentialKind::power_law_cutoff && !(eta > 0.0 && eta < std::min(2.0, double(d))))
    m << "power_law_cutoff needs eta in (0, min(2, d)) to be a Kato potential, got " << eta;
  else if (kind == PotentialKind::grid_sampled) {
    if (sample_grid.d != d) m << "grid_sampled: sample grid dimension " << sample_grid.d << " != " << d;
    else if (static_cast<long>(samples.size()) != sample_grid.points())
      m << "grid_sampled: expected " << sample_grid.points() << " samples, got " << samples.size();
  }
  if (!m.str().empty()) throw DomainError(m.str());
}

double PotentialSpec::support_radius() const { return is_radial() ? radius : sample_grid.L / 5.0; }

double PotentialSpec::radial_value(double r, double cap_radius) const {
  switch (kind) {
    case PotentialKind::square_well: return r < radius ? -amplitude : 0.0;
    case PotentialKind::gaussian_well: return -amplitude * std::exp(-0.5 * (r / radius) * (r / radius));
    case PotentialKind::power_law_cutoff:
      return r < radius ? -amplitude * std::pow(std::max(r, cap_radius), -eta) : 0.0;
    case PotentialKind::grid_sampled: break;
  }
  throw DomainError("radial_value: grid_sampled potentials have no radial profile");
}

double PotentialSpec::radial_negative_part(double r) const { return std::max(0.0, -radial_value(r)); }

PotentialSpec PotentialSpec::scaled(double mu, double gamma) const {
  if (!(mu > 0.0)) throw DomainError("scaled: mu must be > 0");
  PotentialSpec s = *this;
  const double amp = std::pow(mu, d / (gamma + 0.5 * d));
  for (double& c : s.center) c /= mu;
  switch (kind) {
    case PotentialKind::square_well:
    case PotentialKind::gaussian_well:
      s.amplitude = amplitude * amp;
      s.radius = radius / mu;
      break;
    case PotentialKind::power_law_cutoff:
      // A(μr)^{−η} = (Aμ^{−η}) r^{−η}
      s.amplitude = amplitude * amp * std::pow(mu, -eta);
      s.radius = radius / mu;
      break;
    case PotentialKind::grid_sampled:
      s.sample_grid.L = sample_grid.L / mu;
      for (double& v : s.samples) v *= amp;
      break;
  }
  return s;
}

SymmetricOperator DiscretePotential::diagonal() const {
  return SymmetricOperator::diagonal(std::span<const double>(values.data(), values.size()));
}

SymmetricOperator DiscretePotential::negative_diagonal() const {
  return SymmetricOperator::diagonal(std::span<const double>(negative_part.data(), negative_part.size()));
}

GridSpec default_grid(const PotentialSpec& V, int n) { return GridSpec{V.d, 5.0 * V.support_radius(), n}; }

namespace {

void check_cap(const GridSpec& grid, long max_points) {
  const long N = grid.points();
  if (N > max_points) {
    std::ostringstream m;
    m << "grid of " << grid.n << "^" << grid.d << " = " << N << " points exceeds the memory cap of " << max_points
      << " points (dense operator needs " << (static_cast<double>(N) * N * 8.0 / (1 << 20))
      << " MiB); raise the cap to at least " << N;
    throw DomainError(m.str());
  }
}

}  // namespace

SymmetricOperator laplacian_matrix(const GridSpec& grid, long max_points) {
  grid.validate(1);
  check_cap(grid, max_points);
  const long N = grid.points();
  const double ih2 = 1.0 / (grid.h() * grid.h());
  RealMatrix M = RealMatrix::Zero(N, N);
  long stride = 1;
  for (int a = grid.d - 1; a >= 0; --a) {
    for (long k = 0; k < N; ++k) {
      M(k, k) += 2.0 * ih2;
      const long i = (k / stride) % grid.n;
      if (i + 1 < grid.n) {
        M(k, k + stride) = -ih2;
        M(k + stride, k) = -ih2;
      }
    }
    stride *= grid.n;
  }
  return SymmetricOperator(M);
}

DiscretePotential discretize(const PotentialSpec& V, const GridSpec& grid) {
  V.validate();
  grid.validate(1);
  if (V.d != grid.d) {
    std::ostringstream m;
    m << "discretize: potential dimension " << V.d << " != grid dimension " << grid.d;
    throw DomainError(m.str());
  }
  const long N = grid.points();
  DiscretePotential out;
  out.values.resize(N);
  if (V.kind == PotentialKind::grid_sampled) {
    const GridSpec& s = V.sample_grid;
    if (s.n != grid.n || std::abs(s.L - grid.L) > 1e-12 * grid.L)
      throw DomainError("discretize: grid_sampled potential must be sampled on the target grid");
    for (long k = 0; k < N; ++k) out.values[k] = V.samples[k];
  } else {
    const double cap = 0.5 * grid.h();
    std::vector<double> x(grid.d);
    for (long k = 0; k < N; ++k) {
      grid.coords(k, x);
      double r2 = 0.0;
      for (int a = 0; a < grid.d; ++a) {
        const double c = V.center.empty() ? 0.0 : V.center[a];
        r2 += (x[a] - c) * (x[a] - c);
      }
      out.values[k] = V.radial_value(std::sqrt(r2), cap);
    }
  }
  out.negative_part = out.values.cwiseMin(0.0);
  return out;
}

double lp_norm(const RealVector& v_minus, const GridSpec& grid, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  double s = 0.0;
  for (Eigen::Index k = 0; k < v_minus.size(); ++k) s += std::pow(std::abs(v_minus[k]), p);
  return std::pow(grid.cell_volume() * s, 1.0 / p);
}

}  // namespace semibound
