#pragma once

#include <optional>
#include <string>

namespace semibound {

constexpr double default_constants_tol = 1e-8;

/// c_k(γ), k = 1..6. c₃ and c₆ come from their Γ closed forms.
double c_integral(int index, double gamma, double tol = default_constants_tol);
/// c₃ and c₆ by quadrature (cross-check of the closed forms).
double c_integral_quadrature(int index, double gamma, double tol = default_constants_tol);
/// Single-integral majorant of c₁ obtained by dropping 1/√y from the inner
/// integral; always ≥ c₁.
double c1_log_majorant(double gamma, double tol = default_constants_tol);

double constant_tr(double gamma, double tol = default_constants_tol);
double constant_hs(double gamma, double tol = default_constants_tol);
double prim_constant(double gamma);
/// sup_{b>0} b^γ/(e^b − 1), a lower bound for any admissible C_tr(γ).
double lower_bound_tr(double gamma);

struct GammaConstants {
  double gamma = 0.0;
  std::optional<double> c1, c2, c3, c4, c5, c6;
  std::optional<double> C_tr, C_HS, prim_constant, lower_bound;
  double quadrature_tol = default_constants_tol;
};

/// Every constant defined at γ; the others stay empty.
GammaConstants gamma_constants(double gamma, double tol = default_constants_tol);

}  // namespace semibound
