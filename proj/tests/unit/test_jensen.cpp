#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/jensen.hpp"
#include "semibound/verify.hpp"

using namespace semibound;
using std::numbers::e;
using std::numbers::pi;

namespace {

SymmetricOperator diag(std::vector<double> d) { return SymmetricOperator::diagonal(d); }

SemigroupPair scalar_pair(double b, double t = 1.0) { return make_pair(diag({0.0}), diag({-b}), t); }

// A random pair with a guaranteed negative eigenvalue, independent of the library generator.
SemigroupPair random_test_pair(int n, std::mt19937_64& rng, double t) {
  std::normal_distribution<double> g;
  RealMatrix G(n, n), H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      G(i, j) = g(rng);
      H(i, j) = g(rng);
    }
  RealMatrix A = G.transpose() * G / n + 0.1 * RealMatrix::Identity(n, n);
  RealMatrix B = A - 1.5 * H.transpose() * H / n;
  return make_pair(SymmetricOperator(A), SymmetricOperator(B), t);
}

}  // namespace

TEST_CASE("make_pair scalar semigroup difference") {
  auto p = scalar_pair(1.0);
  CHECK(p.D()(0, 0) == doctest::Approx(e - 1.0).epsilon(1e-15));
  auto same = make_pair(diag({1.0, 2.0}), diag({1.0, 2.0}), 0.7);
  CHECK(same.D().matrix().cwiseAbs().maxCoeff() == 0.0);

  auto d = make_pair(diag({1.0, 2.0}), diag({-1.0, 3.0}), 0.5);
  CHECK(d.D()(0, 0) == doctest::Approx(std::exp(0.5) - std::exp(-0.5)).epsilon(1e-14));
  CHECK(d.D()(1, 1) == doctest::Approx(std::exp(-1.5) - std::exp(-1.0)).epsilon(1e-14));
  CHECK(d.D()(0, 1) == 0.0);
  CHECK(d.D()(0, 1) == d.D()(1, 0));
}

TEST_CASE("make_pair rejects invalid input") {
  CHECK_THROWS_AS(make_pair(diag({-1e-6}), diag({0.0}), 1.0), HypothesisError);
  CHECK_NOTHROW(make_pair(diag({-1e-11}), diag({0.0}), 1.0));
  CHECK_THROWS_AS(make_pair(diag({1.0}), diag({1.0, 2.0}), 1.0), DomainError);
  CHECK_THROWS_AS(make_pair(diag({1.0}), diag({1.0}), 0.0), DomainError);
}

TEST_CASE("zero eigenvalue of A attaches a warning") {
  CHECK_FALSE(scalar_pair(1.0).warnings().empty());
  CHECK(make_pair(diag({1.0}), diag({-1.0}), 1.0).warnings().empty());
}

TEST_CASE("negative_moment_oracle and count_below") {
  auto B = diag({-3.0, -1.0, 2.0});
  CHECK(negative_moment_oracle(B, 2.0) == doctest::Approx(10.0));
  CHECK(negative_moment_oracle(B, 1.0) == doctest::Approx(4.0));
  CHECK(negative_moment_oracle(diag({0.0, 1.0}), 2.0) == 0.0);
  CHECK(count_below(B, 2.0) == 1);
  CHECK(count_below(B, 0.5) == 2);
  CHECK(count_below(B, 3.0) == 0);
  CHECK(count_below(B, 1.0) == 1);

  // Σ|λ| = ∫₀^∞ N(−s) ds, with N piecewise constant between eigenvalues.
  const double integral = oracle::midpoint([&](double s) { return double(count_below(B, s)); }, 0.0, 4.0, 4000);
  CHECK(integral == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("h_tr closed form for the scalar pair") {
  auto p = scalar_pair(1.0);
  CHECK(h_tr(p, 0.0).log_abs == doctest::Approx(0.0));
  const auto h = h_tr(p, 0.5);
  CHECK(h.log_abs == doctest::Approx(std::log(e - 2.0)).epsilon(1e-13));
  CHECK(h.value().real() == doctest::Approx(2.0 - e).epsilon(1e-13));
  CHECK_THROWS_AS(h_tr(p, 1.0), DomainError);
}

TEST_CASE("h_hs closed form for the scalar pair") {
  auto p = scalar_pair(1.0);
  CHECK(h_hs(p, 0.0).log_abs == doctest::Approx(0.0));
  const double F = e - 1.0;
  CHECK(h_hs(p, 0.5).log_abs == doctest::Approx(std::log(std::abs(1.0 - F * F))).epsilon(1e-13));
  CHECK(h_hs(p, 0.5).log_abs == doctest::Approx(0.6692).epsilon(1e-4));
  CHECK_THROWS_AS(h_hs(p, cplx(0.0, -1.0)), DomainError);
}

TEST_CASE("determinant factorization on a disk test set") {
  std::mt19937_64 rng(21);
  auto p = random_test_pair(5, rng, 0.8);
  const RealMatrix EA = p.exp_A().matrix(), EB = p.exp_B().matrix();
  const ComplexMatrix I = ComplexMatrix::Identity(5, 5);
  int bad = 0;
  for (int k = 0; k < 64; ++k) {
    const double r = 0.95 * ((k % 8) + 1) / 8.0;
    const cplx z = std::polar(r, 2 * pi * (k / 8) / 8.0 + 0.1);
    const double lhs = h_tr(p, z).log_abs + complex_log_det(I - z * EA.cast<cplx>()).log_abs;
    const double rhs = complex_log_det(I - z * EB.cast<cplx>()).log_abs;
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) ++bad;

    // det(I − F²) = det(I − F)·det(I + F)
    const ComplexMatrix F = z * resolvent_scaled(p.exp_A(), z) * p.D().matrix().cast<cplx>();
    const double hs = h_hs(p, z).log_abs;
    const double split = complex_log_det(I - F).log_abs + complex_log_det(I + F).log_abs;
    if (std::abs(hs - split) > 1e-9 * std::max(1.0, std::abs(split))) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("dense and tridiagonal determinant routes agree") {
  std::mt19937_64 rng(22);
  auto p = random_test_pair(7, rng, 1.0);
  DeterminantEvaluator dense(p, DetRoute::dense), tri(p, DetRoute::tridiagonal);
  for (cplx z : {cplx(0.2, 0.3), cplx(-0.7, 0.1), cplx(0.9, -0.05)}) {
    CHECK(tri.log_abs_h_tr(z) == doctest::Approx(dense.log_abs_h_tr(z)).epsilon(1e-10));
    CHECK(tri.log_abs_h_hs(z) == doctest::Approx(dense.log_abs_h_hs(z)).epsilon(1e-10));
  }
}

TEST_CASE("zeros of h_tr sit at exp(t*lambda) for negative lambda") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = random_test_pair(4 + trial % 3, rng, 0.5 + 0.2 * trial);
    const RealVector radii = jensen_zero_radii(p);
    std::vector<double> expected;
    for (double l : p.spectrum_B().eigenvalues)
      if (l < 0) expected.push_back(std::exp(p.t() * l));
    std::sort(expected.begin(), expected.end());
    REQUIRE(radii.size() == static_cast<Eigen::Index>(expected.size()));
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(radii(i) - expected[i]) <= 1e-6);

    // The angular mean of log|h| is piecewise linear in log r with slope n(r),
    // the number of zeros inside radius r. Count on both sides of each zero.
    auto count_at = [&](double a, double b) {
      return (jensen_angular_mean_tr(p, b) - jensen_angular_mean_tr(p, a)) / (std::log(b) - std::log(a));
    };
    auto inside = [&](double r) {
      return double(std::count_if(expected.begin(), expected.end(), [&](double x) { return x < r; }));
    };
    for (double rho : expected) {
      const double below_a = rho * (1 - 1e-3), below_b = rho * (1 - 2e-4);
      const double above_a = rho * (1 + 2e-4), above_b = rho * (1 + 1e-3);
      if (inside(below_a) != inside(below_b) || inside(above_a) != inside(above_b) || above_b >= 0.999) continue;
      CHECK(std::abs(count_at(below_a, below_b) - inside(below_a)) < 1e-3);
      CHECK(std::abs(count_at(above_a, above_b) - inside(above_a)) < 1e-3);
    }
  }
}

TEST_CASE("jensen identity on simple pairs") {
  auto psd = make_pair(diag({1.0, 2.0}), diag({0.5, 3.0}), 1.0);
  CHECK(std::abs(moment_via_jensen_tr(psd, {2.0, 1e-8}).value) <= 1e-8);
  CHECK(moment_via_jensen_hs(psd, {2.0, 1e-8}).value >= -1e-8);

  auto p = scalar_pair(1.0);
  const auto j = moment_via_jensen_tr(p, {2.0, 1e-8});
  CHECK(std::abs(j.value - 1.0) <= 1e-6);
  for (double r : j.radial_nodes) {
    CHECK(r > 0.0);
    CHECK(r < 1.0);
  }
  CHECK(moment_via_jensen_hs(p, {2.0, 1e-8}).value >= 1.0 - 1e-8);
}

TEST_CASE("jensen identity on random pairs") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 4; ++trial) {
    auto p = random_test_pair(6, rng, 0.9);
    SymmetricOperator tB = p.B().scaled(p.t());
    const double oracle = negative_moment_oracle(tB, 2.5);
    const double j = moment_via_jensen_tr(p, {2.5, 1e-8}).value;
    CHECK(std::abs(j - oracle) <= std::max(1e-6, 1e-4 * oracle));
  }
}

TEST_CASE("jensen hs is an upper bound on random pairs") {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 3; ++trial) {
    auto p = random_test_pair(5, rng, 1.0);
    const double oracle = negative_moment_oracle(p.B(), 3.0);
    const double j = moment_via_jensen_hs(p, {3.0, 1e-8}).value;
    CHECK(std::isfinite(j));
    CHECK(j >= oracle - 1e-8);
  }
}

TEST_CASE("jensen gamma = 1 limit") {
  for (double b : {0.5, 1.0, 2.0}) {
    const auto j = moment_via_jensen_tr(scalar_pair(b), {1.0, 1e-8});
    CHECK(std::abs(j.value - b) <= 1e-4);
    CHECK_FALSE(j.warnings.empty());
  }
  CHECK_THROWS_AS(moment_via_jensen_tr(scalar_pair(1.0), {0.5, 1e-8}), DomainError);
}

TEST_CASE("ggiq and ineqhs") {
  auto zero = make_pair(diag({1.0, 2.0}), diag({1.0, 2.0}), 1.0);
  CHECK(bound_ggiq(zero, {2.0, 1e-8}).bound == 0.0);
  CHECK(bound_ineqhs(zero, {3.0, 1e-8}).bound == 0.0);

  auto p = scalar_pair(1.0);
  const auto g = bound_ggiq(p, {2.0, 1e-8});
  CHECK(std::isfinite(g.bound));
  CHECK(g.bound >= 1.0);
  CHECK(g.theorem_tag == TheoremTag::ggiq);
  const auto h = bound_ineqhs(p, {3.0, 1e-8});
  CHECK(std::isfinite(h.bound));
  CHECK(h.bound >= 1.0);

  std::mt19937_64 rng(26);
  auto q = random_test_pair(5, rng, 1.0);
  const double oracle = negative_moment_oracle(q.B(), 2.0);
  const double j = moment_via_jensen_tr(q, {2.0, 1e-8}).value;
  CHECK(bound_ggiq(q, {2.0, 1e-8}).bound >= j - 1e-8);
  CHECK(bound_ggiq(q, {2.0, 1e-8}).bound >= oracle - 1e-8);
  CHECK(bound_ineqhs(q, {3.0, 1e-8}).bound >= negative_moment_oracle(q.B(), 3.0) - 1e-8);
  CHECK_THROWS_AS(bound_ggiq(q, {1.0, 1e-8}), DomainError);
}

TEST_CASE("prim bound") {
  auto zero = make_pair(diag({1.0}), diag({1.0}), 1.0);
  CHECK(bound_prim(zero, 3.0).bound == 0.0);
  auto p = scalar_pair(1.0);
  const auto b = bound_prim(p, 3.0);
  CHECK(b.inputs.constant == doctest::Approx(pi * pi).epsilon(1e-12));
  CHECK(b.bound == doctest::Approx(pi * pi * (e - 1.0)).epsilon(1e-12));
  CHECK(b.bound == doctest::Approx(16.96).epsilon(1e-3));
  CHECK_THROWS_AS(bound_prim(p, 2.0), DomainError);
}

TEST_CASE("exp bound") {
  auto zero = make_pair(diag({1.0}), diag({1.0}), 1.0);
  CHECK(bound_exp(zero, 2.0).bound == 0.0);
  for (double b : {0.1, 1.0, 5.0}) CHECK(bound_exp(scalar_pair(b), 2.0).bound >= std::pow(b, 2.0));
  CHECK_THROWS_AS(bound_exp(scalar_pair(1.0), 1.0), DomainError);

  std::mt19937_64 rng(27);
  auto q = random_test_pair(6, rng, 1.0);
  CHECK(bound_exp(q, 1.5).bound >= negative_moment_oracle(q.B(), 1.5));
}

TEST_CASE("exphs bound") {
  auto zero = make_pair(diag({1.0}), diag({1.0}), 1.0);
  CHECK(bound_exphs(zero, 3.0).bound == 0.0);
  const auto b = bound_exphs(scalar_pair(1.0), 3.0);
  CHECK(b.bound == doctest::Approx(constant_hs(3.0) * (e - 1.0) * (e - 1.0)).epsilon(1e-12));
  CHECK(b.bound >= 1.0);
  CHECK_THROWS_AS(bound_exphs(scalar_pair(1.0), 2.0), DomainError);

  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 5; ++trial) {
    auto q = random_test_pair(5, rng, 0.8);
    CHECK(bound_exphs(q, 3.0).bound >= negative_moment_oracle(q.B(), 3.0));
  }
}

TEST_CASE("exp bound is covariant under (A, B, t) -> (tA, tB, 1)") {
  std::mt19937_64 rng(29);
  auto p = random_test_pair(5, rng, 0.6);
  auto q = make_pair(p.A().scaled(0.6), p.B().scaled(0.6), 1.0);
  for (double g : {1.5, 2.0, 3.0}) {
    const double lhs = std::pow(0.6, g) * bound_exp(p, g).bound;
    CHECK(oracle::rel_err(lhs, bound_exp(q, g).bound) <= 1e-12);
  }
}

TEST_CASE("counting bound") {
  auto psd = make_pair(diag({1.0}), diag({2.0}), 1.0);
  CHECK(counting_bound({psd}, {2.0}, 0.5) >= 0.0);

  std::vector<SemigroupPair> pairs;
  for (double t : {0.5, 1.0, 2.0}) pairs.push_back(scalar_pair(1.0, t));
  const double v = counting_bound(pairs, {1.5, 2.0, 3.0}, 0.5);
  CHECK(v >= 1.0);
  CHECK(v >= double(count_below(diag({-1.0}), 0.5)));

  std::vector<SemigroupPair> finer = pairs;
  for (double t : {0.75, 1.5, 3.0}) finer.push_back(scalar_pair(1.0, t));
  CHECK(counting_bound(finer, {1.5, 2.0, 2.5, 3.0}, 0.5) <= v);
  CHECK_THROWS_AS(counting_bound({}, {2.0}, 0.5), DomainError);
  CHECK_THROWS_AS(counting_bound(pairs, {}, 0.5), DomainError);
}

TEST_CASE("random_pair is deterministic and has negative spectrum") {
  auto a = random_pair(6, 42, 3);
  auto b = random_pair(6, 42, 3);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->A.matrix() == b->A.matrix());
  CHECK(a->B.matrix() == b->B.matrix());
  CHECK(a->t == b->t);
  CHECK(eigvalsh(a->B).minCoeff() < -1e-6);
  CHECK(eigvalsh(a->A).minCoeff() >= 0.0);
  CHECK(random_pair(6, 42, 4)->B.matrix() != a->B.matrix());
}

TEST_CASE("run_trial chains hold on a few trials") {
  for (int trial = 0; trial < 3; ++trial) {
    for (const auto& row : run_trial(VerifyMode::chain_tr, 5, trial, {1.5, 3.0}, 7, 1e-8))
      CHECK(row.status == RowStatus::ok);
    for (const auto& row : run_trial(VerifyMode::chain_hs, 5, trial, {2.5}, 7, 1e-8))
      CHECK(row.status == RowStatus::ok);
  }
  const auto rows = run_trial(VerifyMode::chain_hs, 5, 0, {2.0}, 7, 1e-8);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == RowStatus::domain);
}
