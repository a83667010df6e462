#include "semibound/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "semibound/error.hpp"
#include "semibound/jensen.hpp"

namespace semibound {

std::string to_string(VerifyMode m) {
  switch (m) {
    case VerifyMode::identity_tr: return "identity-tr";
    case VerifyMode::identity_hs: return "identity-hs";
    case VerifyMode::chain_tr: return "chain-tr";
    case VerifyMode::chain_hs: return "chain-hs";
  }
  return "?";
}

VerifyMode verify_mode_from_string(const std::string& s) {
  for (auto m : {VerifyMode::identity_tr, VerifyMode::identity_hs, VerifyMode::chain_tr, VerifyMode::chain_hs})
    if (to_string(m) == s) return m;
  throw DomainError("unknown verify mode '" + s + "' (expected identity-tr, identity-hs, chain-tr or chain-hs)");
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::violation: return "violation";
    case RowStatus::skipped: return "skipped";
    case RowStatus::domain: return "domain";
  }
  return "?";
}

std::optional<RandomPair> random_pair(int dim, std::uint64_t seed, std::uint64_t trial) {
  if (dim < 1) throw DomainError("random_pair: dim must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  auto draw = [&] {
    RealMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = gauss(rng);
    return m;
  };
  for (int k = 1; k <= 100; ++k) {
    const RealMatrix G = draw(), H = draw();
    const double rho = 0.5 + 1.5 * unit(rng);
    const double t = 0.5 + unit(rng);
    RealMatrix A = G.transpose() * G / dim;
    A.diagonal().array() += 0.05;
    const RealMatrix B = A - rho * H.transpose() * H / dim;
    SymmetricOperator sb(B);
    if (eigvalsh(sb)[0] < -1e-6) return RandomPair{SymmetricOperator(A), sb, t, k};
  }
  return std::nullopt;
}

namespace {

// a ≤ b·(1 + slack) + tol; tol covers the quadrature error of either side.
bool leq(double a, double b, double tol = 0.0) { return a <= b + chain_slack * std::abs(b) + tol; }

void mark(VerifyRow& r, bool ok, const std::string& what) {
  if (ok) return;
  r.status = RowStatus::violation;
  if (!r.note.empty()) r.note += "; ";
  r.note += what;
}

void identity_row(VerifyRow& r, const SemigroupPair& pair, bool hs, double tol) {
  const double tg = std::pow(pair.t(), r.gamma);
  r.oracle = tg * negative_moment_oracle(pair.B(), r.gamma);
  const auto ev = hs ? moment_via_jensen_hs(pair, {r.gamma, tol}) : moment_via_jensen_tr(pair, {r.gamma, tol});
  r.jensen = ev.value;
  r.tolerance = std::max(1e-6, 1e-4 * *r.oracle);
  if (hs) {
    // One-sided: the HS integral majorizes the moment.
    r.residual = *r.oracle - ev.value;
    mark(r, *r.residual <= *r.tolerance, "jensen-hs below oracle");
  } else {
    r.residual = std::abs(ev.value - *r.oracle);
    mark(r, *r.residual <= *r.tolerance, "identity residual above tolerance");
  }
}

void chain_tr_row(VerifyRow& r, const SemigroupPair& pair, double tol) {
  const double g = r.gamma;
  r.oracle = negative_moment_oracle(pair.B(), g);
  r.ggiq = bound_ggiq(pair, {g, tol}).bound;
  r.exp = bound_exp(pair, g).bound;
  mark(r, leq(*r.oracle, *r.ggiq, tol), "oracle > ggiq");
  mark(r, leq(*r.ggiq, *r.exp, tol), "ggiq > exp");
  if (g > 2.0) {
    r.prim = bound_prim(pair, g).bound;
    mark(r, leq(*r.exp, *r.prim), "exp > prim");
  }
}

void chain_hs_row(VerifyRow& r, const SemigroupPair& pair, double tol) {
  const double g = r.gamma;
  if (!(g > 2.0)) {
    std::ostringstream m;
    m << "chain-hs needs gamma > 2, got " << g;
    throw DomainError(m.str());
  }
  r.oracle = negative_moment_oracle(pair.B(), g);
  r.jensen = moment_via_jensen_hs(pair, {g, tol}).value;
  const double jensen_b = *r.jensen / std::pow(pair.t(), g);
  r.ineqhs = bound_ineqhs(pair, {g, tol}).bound;
  r.exphs = bound_exphs(pair, g).bound;
  mark(r, leq(*r.oracle, jensen_b, tol), "oracle > jensen-hs");
  mark(r, leq(jensen_b, *r.ineqhs, tol), "jensen-hs > ineqhs");
  mark(r, leq(*r.ineqhs, *r.exphs, tol), "ineqhs > exphs");
}

}  // namespace

std::vector<VerifyRow> run_trial(VerifyMode mode, int dim, int trial, const std::vector<double>& gammas,
                                 std::uint64_t seed, double tol) {
  std::vector<VerifyRow> rows;
  const auto rp = random_pair(dim, seed, static_cast<std::uint64_t>(trial));
  for (double g : gammas) {
    VerifyRow r;
    r.trial = trial;
    r.dim = dim;
    r.gamma = g;
    if (!rp) {
      r.status = RowStatus::skipped;
      r.draws = 100;
      r.note = "no negative spectrum after 100 draws";
      rows.push_back(r);
      continue;
    }
    r.draws = rp->draws;
    r.t = rp->t;
    try {
      const SemigroupPair pair(rp->A, rp->B, rp->t);
      switch (mode) {
        case VerifyMode::identity_tr: identity_row(r, pair, false, tol); break;
        case VerifyMode::identity_hs: identity_row(r, pair, true, tol); break;
        case VerifyMode::chain_tr: chain_tr_row(r, pair, tol); break;
        case VerifyMode::chain_hs: chain_hs_row(r, pair, tol); break;
      }
    } catch (const std::invalid_argument& e) {
      r.status = RowStatus::domain;
      r.note = e.what();
    } catch (const ConvergenceError& e) {
      r.status = RowStatus::violation;
      r.note = e.what();
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace semibound
