#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "oracles.hpp"
#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/specfun.hpp"

using namespace semibound;
using std::numbers::pi;

namespace {

// sup_b b^γ/(e^b − 1) by golden section, with no Lambert W involved.
double brute_lower_bound(double g) {
  auto f = [g](double b) { return std::pow(b, g) / std::expm1(b); };
  return oracle::golden_max(f, 1e-6, 60.0).second;
}

// Midpoint rule after r = (1 − cos πu)/2, which flattens log singularities at both ends.
double graded_midpoint(const std::function<double(double)>& f, long n) {
  return oracle::midpoint(
      [&](double u) {
        const double r = 0.5 * (1.0 - std::cos(pi * u));
        return f(r) * 0.5 * pi * std::sin(pi * u);
      },
      0.0, 1.0, n);
}

}  // namespace

TEST_CASE("c3 and c6 closed forms at gamma = 2") {
  CHECK(c_integral(3, 2.0) == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(c_integral(6, 2.0) == doctest::Approx(pi / 4).epsilon(1e-14));
}

TEST_CASE("c3 and c6 quadrature against closed forms") {
  for (double g : {1.5, 2.0, 3.0, 5.0}) {
    CHECK(oracle::rel_err(c_integral_quadrature(3, g), (pi / 2) * gamma_fn(g - 1)) <= 1e-8);
    CHECK(oracle::rel_err(c_integral_quadrature(6, g), pi * std::pow(2.0, -g) * gamma_fn(g - 1)) <= 1e-8);
  }
}

TEST_CASE("c2 against a brute-force Riemann sum") {
  const double g = 3.0;
  const double ref =
      0.5 * graded_midpoint([g](double r) { return std::pow(-std::log(r), g - 2) * std::log((1 + r) / (1 - r)); },
                            1000000);
  CHECK(oracle::rel_err(c_integral(2, g), ref) <= 1e-6);
  // γ = 2 has the closed form log 2.
  CHECK(oracle::rel_err(c_integral(2, 2.0), std::log(2.0)) <= 1e-9);
}

TEST_CASE("c5 against a brute-force Riemann sum") {
  const double g = 2.5;
  const double ref = graded_midpoint(
      [g](double r) { return std::pow(-std::log(r), g - 2) * r * r / std::sqrt((1 - r) * (1 + r)); }, 1000000);
  CHECK(oracle::rel_err(c_integral(5, g), ref) <= 1e-6);
}

TEST_CASE("c1 log-form majorant dominates c1") {
  for (double g : {1.5, 2.0, 3.0, 5.0}) CHECK(c1_log_majorant(g) >= c_integral(1, g));
}

TEST_CASE("c-integral domains") {
  CHECK_THROWS_AS(c_integral(1, 1.0), DomainError);
  CHECK_THROWS_AS(c_integral(2, 0.9), DomainError);
  CHECK_THROWS_AS(c_integral(4, 2.0), DomainError);
  CHECK_THROWS_AS(c_integral(4, 1.5), DomainError);
  CHECK_THROWS_AS(c_integral(5, 1.5), DomainError);
  CHECK_NOTHROW(c_integral(5, 1.6));
  CHECK_THROWS_AS(c_integral(6, 1.0), DomainError);
  CHECK_THROWS_AS(c_integral(7, 2.0), DomainError);
}

TEST_CASE("C_tr(2) lower anchor") {
  CHECK(constant_tr(2.0) >= 0.647);
  CHECK(lower_bound_tr(2.0) == doctest::Approx(0.6476).epsilon(1e-3 / 0.6476));
}

TEST_CASE("C_tr(2) computed value") {
  CHECK(constant_tr(2.0) == doctest::Approx(2.6075148).epsilon(1e-7));
}

TEST_CASE("C_tr(2) stays below 2.5") {
  // Expected to fail: the exact integrals give 2.6075.
  CHECK(constant_tr(2.0) <= 2.5 * 1.01);
}

TEST_CASE("C_tr(3) does not exceed the Gamma-zeta constant") { CHECK(constant_tr(3.0) <= pi * pi); }

TEST_CASE("C_tr and C_HS assembly") {
  for (double g : {2.5, 3.0}) {
    const double s = c_integral(1, g) + c_integral(2, g) + c_integral(3, g);
    CHECK(oracle::rel_err(constant_tr(g), g * (g - 1) / pi * s) <= 1e-14);
    const double h = c_integral(4, g) + c_integral(5, g) + c_integral(6, g);
    CHECK(oracle::rel_err(constant_hs(g), g * (g - 1) / pi * h) <= 1e-14);
  }
}

TEST_CASE("C_HS positive and diverging toward gamma = 2") {
  const double v3 = constant_hs(3.0);
  CHECK(std::isfinite(v3));
  CHECK(v3 > 0.0);
  const double a = constant_hs(2.1), b = constant_hs(2.05), c = constant_hs(2.01);
  CHECK(a < b);
  CHECK(b < c);
  CHECK_THROWS_AS(constant_hs(2.0), DomainError);
}

TEST_CASE("prim constant") {
  CHECK(prim_constant(3.0) == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(prim_constant(4.0) == doctest::Approx(24 * 1.2020569031595942).epsilon(1e-12));
  CHECK(prim_constant(4.0) == doctest::Approx(28.849).epsilon(1e-4));
  CHECK(prim_constant(2.5) == doctest::Approx(gamma_fn(3.5) * riemann_zeta(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(prim_constant(2.0), DomainError);
}

TEST_CASE("lower bound matches direct maximization") {
  for (double g : {1.5, 2.0, 3.0, 5.0}) CHECK(oracle::rel_err(lower_bound_tr(g), brute_lower_bound(g)) <= 1e-8);
  CHECK_THROWS_AS(lower_bound_tr(1.0), DomainError);
}

TEST_CASE("lower bound below C_tr") {
  for (double g : {1.5, 2.0, 3.0, 5.0}) CHECK(lower_bound_tr(g) <= constant_tr(g));
}

TEST_CASE("C_tr below the Gamma-zeta constant") {
  for (double g : {2.5, 3.0, 4.0, 6.0}) CHECK(constant_tr(g) <= prim_constant(g));
}

TEST_CASE("gamma_constants fills exactly the defined fields") {
  const auto a = gamma_constants(1.5);
  CHECK(a.C_tr.has_value());
  CHECK(a.lower_bound.has_value());
  CHECK_FALSE(a.C_HS.has_value());
  CHECK_FALSE(a.prim_constant.has_value());
  CHECK_FALSE(a.c4.has_value());
  CHECK(a.c6.has_value());

  const auto b = gamma_constants(3.0);
  for (const auto& v : {b.c1, b.c2, b.c3, b.c4, b.c5, b.c6, b.C_tr, b.C_HS, b.prim_constant, b.lower_bound}) {
    REQUIRE(v.has_value());
    CHECK(std::isfinite(*v));
    CHECK(*v > 0.0);
  }
  const auto none = gamma_constants(0.9);
  CHECK_FALSE(none.C_tr.has_value());
}

TEST_CASE("memoized constants are identical across threads") {
  const double g = 2.37;
  std::vector<double> out(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) threads.emplace_back([&, i] { out[i] = constant_tr(g); });
  for (auto& t : threads) t.join();
  for (double v : out) CHECK(v == out[0]);
  CHECK(constant_tr(g) == out[0]);
}
