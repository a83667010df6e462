#pragma once

#include <functional>

namespace semibound {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

struct EndpointFlags {
  bool left = false;
  bool right = false;
};

struct QuadOptions {
  double rel_tol = 0.0;
  int max_panels = 4000;
};

/// Point handed to integrands that need the distance to the endpoints without
/// cancellation (x − a and b − x are exact when produced by a substitution).
struct Abscissa {
  double x;
  double from_left;
  double from_right;
};

using Integrand = std::function<double(double)>;
using EndpointIntegrand = std::function<double(const Abscissa&)>;

/// Globally adaptive Gauss–Kronrod (7/15). Flagged endpoints are treated by
/// x − a = e^{−u} (resp. b − x), b may be +∞. Stops when the summed error
/// estimate is below max(tol, rel_tol·|I|); throws ConvergenceError carrying
/// the best estimate when the panel budget runs out.
QuadResult adaptive_quad(const Integrand& f, double a, double b, double tol, EndpointFlags flags = {},
                         const QuadOptions& opts = {});
QuadResult adaptive_quad(const EndpointIntegrand& f, double a, double b, double tol, EndpointFlags flags = {},
                         const QuadOptions& opts = {});

struct PeriodicMeanResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int nodes = 0;  // on the full period
  bool converged = false;
};

/// (1/π)∫₀^π f(θ)dθ for f even and 2π-periodic, i.e. the mean over the circle.
/// Trapezoid rule in τ with θ = 2π(τ − sin(4πτ)/(4π)), which packs nodes near
/// θ = 0 and θ = π. Nodes double from `initial_nodes` (full period) until two
/// successive estimates differ by less than tol/4.
PeriodicMeanResult even_periodic_mean(const std::function<double(double)>& f, double tol,
                                      int initial_nodes = 64, int max_nodes = 1 << 16);

/// Plain periodic trapezoid with doubling: (1/2π)∫₀^{2π} f.
PeriodicMeanResult periodic_mean(const std::function<double(double)>& f, double tol, int initial_nodes = 64,
                                 int max_nodes = 1 << 16);

}  // namespace semibound
