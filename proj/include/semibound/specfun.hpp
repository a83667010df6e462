#pragma once

namespace semibound {

double gamma_fn(double x);
double riemann_zeta(double s);
/// Principal branch of Lambert W on [−1/e, ∞).
double lambert_w0(double x);
/// Modified Bessel function of the second kind, K_ν(x), for ν ∈ {0, 1/2, 1, …, 9/2}.
double bessel_k(double nu, double x);

}  // namespace semibound
