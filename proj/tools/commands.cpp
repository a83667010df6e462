#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "config.hpp"
#include "report.hpp"
#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/jensen.hpp"
#include "semibound/matrix_core.hpp"
#include "semibound/schrodinger.hpp"
#include "semibound/verify.hpp"

namespace semibound::cli {

using nlohmann::json;
namespace fs = std::filesystem;

void parallel_for(int n, int jobs, const std::function<void(int)>& f) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

namespace {

void emit(const Common& c, const std::string& name, const std::string& text) {
  if (c.out) write_file(fs::path(*c.out) / name, text);
}

std::string out_of_domain(const std::optional<double>& v) { return v ? fmt9(*v) : "out-of-domain"; }

// Runs a command body and maps exceptions onto exit codes.
template <class F>
int guarded(Streams io, F body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    io.err << "error: " << e.what() << '\n';
  } catch (const HypothesisError& e) {
    io.err << "error: hypothesis violated: " << e.what() << '\n';
  } catch (const DomainError& e) {
    io.err << "error: " << e.what() << '\n';
  } catch (const ConvergenceError& e) {
    io.err << "error: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
  }
  return exit_error;
}

}  // namespace

int cmd_constants(const std::vector<double>& gammas, double tol, const Common& c, Streams io) {
  return guarded(io, [&] {
    if (!(tol > 0.0)) throw DomainError("--tol must be > 0");
    std::vector<GammaConstants> rows(gammas.size());
    std::vector<std::string> errors(gammas.size());
    parallel_for(static_cast<int>(gammas.size()), c.jobs, [&](int i) {
      try {
        if (!(gammas[i] > 1.0)) throw DomainError("C_tr(gamma) requires gamma > 1");
        rows[i] = gamma_constants(gammas[i], tol);
      } catch (const std::exception& e) {
        rows[i] = GammaConstants{};
        rows[i].gamma = gammas[i];
        errors[i] = e.what();
      }
    });
    Table table({"gamma", "C_tr", "C_HS", "Gamma*zeta", "lower", "c1", "c2", "c3", "c4", "c5", "c6"});
    Csv csv({"gamma", "C_tr", "C_HS", "prim_constant", "lower_bound", "c1", "c2", "c3", "c4", "c5", "c6", "error"});
    json js = json::array();
    bool any_error = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& g = rows[i];
      if (!errors[i].empty()) {
        any_error = true;
        io.err << "gamma = " << fmt9(gammas[i]) << ": " << errors[i] << '\n';
      }
      table.add({fmt9(g.gamma), out_of_domain(g.C_tr), out_of_domain(g.C_HS), out_of_domain(g.prim_constant),
                 out_of_domain(g.lower_bound), out_of_domain(g.c1), out_of_domain(g.c2), out_of_domain(g.c3),
                 out_of_domain(g.c4), out_of_domain(g.c5), out_of_domain(g.c6)});
      csv.add({csv_num(g.gamma), csv_num(g.C_tr), csv_num(g.C_HS), csv_num(g.prim_constant), csv_num(g.lower_bound),
               csv_num(g.c1), csv_num(g.c2), csv_num(g.c3), csv_num(g.c4), csv_num(g.c5), csv_num(g.c6), errors[i]});
      json j = to_json(g);
      j["error"] = errors[i].empty() ? json(nullptr) : json(errors[i]);
      js.push_back(j);
    }
    table.print(io.out);
    emit(c, "constants.csv", csv.str());
    emit(c, "constants.json", json{{"command", "constants"}, {"tol", tol}, {"rows", js}}.dump(2) + "\n");
    return any_error ? exit_error : exit_ok;
  });
}

int cmd_verify(const std::string& mode_name, int dim, int trials, const std::vector<double>& gammas,
               std::uint64_t seed, double tol, const Common& c, Streams io) {
  return guarded(io, [&] {
    const VerifyMode mode = verify_mode_from_string(mode_name);
    if (dim < 1) throw DomainError("--dim must be >= 1");
    if ((mode == VerifyMode::identity_tr || mode == VerifyMode::identity_hs) && dim > 16)
      throw DomainError("identity modes are limited to --dim <= 16 (determinant quadrature cost)");
    if (trials < 0) throw DomainError("--trials must be >= 0");
    if (!(tol > 0.0)) throw DomainError("--tol must be > 0");
    std::vector<std::vector<VerifyRow>> per(trials);
    parallel_for(trials, c.jobs, [&](int k) { per[k] = run_trial(mode, dim, k, gammas, seed, tol); });

    Csv csv(verify_csv_header());
    json rows = json::array();
    int ok = 0, bad = 0, skipped = 0, domain = 0;
    double max_res = 0.0;
    for (const auto& trial : per)
      for (const auto& r : trial) {
        csv.add(verify_csv_row(r));
        rows.push_back(to_json(r));
        switch (r.status) {
          case RowStatus::ok: ++ok; break;
          case RowStatus::violation: ++bad; break;
          case RowStatus::skipped: ++skipped; break;
          case RowStatus::domain: ++domain; break;
        }
        if (r.residual && (mode == VerifyMode::identity_tr || mode == VerifyMode::identity_hs))
          max_res = std::max(max_res, *r.residual);
        if (r.status == RowStatus::violation || r.status == RowStatus::domain)
          io.err << "trial " << r.trial << " gamma " << fmt9(r.gamma) << ": " << to_string(r.status) << ": "
                 << r.note << '\n';
      }
    Table t({"mode", "dim", "trials", "rows", "ok", "violations", "skipped", "domain", "max_residual"});
    t.add({mode_name, std::to_string(dim), std::to_string(trials), std::to_string(ok + bad + skipped + domain),
           std::to_string(ok), std::to_string(bad), std::to_string(skipped), std::to_string(domain), fmt9(max_res)});
    t.print(io.out);
    emit(c, "verify.csv", csv.str());
    emit(c, "verify.json",
         json{{"command", "verify"},
              {"mode", mode_name},
              {"dim", dim},
              {"trials", trials},
              {"gammas", gammas},
              {"seed", seed},
              {"tol", tol},
              {"summary", {{"ok", ok}, {"violations", bad}, {"skipped", skipped}, {"domain", domain},
                           {"max_residual", max_res}}},
              {"rows", rows}}
                 .dump(2) +
             "\n");
    if (bad > 0) return exit_violation;
    return domain > 0 ? exit_error : exit_ok;
  });
}

int cmd_bound(const std::string& a_path, const std::string& b_path, double t, const std::vector<double>& gammas,
              std::optional<double> s, const Common& c, Streams io) {
  return guarded(io, [&] {
    auto ra = read_matrix_file(a_path);
    auto rb = read_matrix_file(b_path);
    for (const auto& w : ra.warnings) io.err << "warning: A: " << w << '\n';
    for (const auto& w : rb.warnings) io.err << "warning: B: " << w << '\n';
    if (ra.op.dim() != rb.op.dim()) throw DomainError("A and B must have the same dimension");
    if (!(t > 0.0)) throw DomainError("--t must be > 0");
    const SemigroupPair pair(ra.op, rb.op, t);
    for (const auto& w : pair.warnings()) io.err << "warning: " << w << '\n';

    Table table({"gamma", "oracle", "prim", "exp", "exphs"});
    Csv csv({"gamma", "oracle", "prim", "exp", "exphs", "violation"});
    json rows = json::array();
    bool violated = false;
    for (double g : gammas) {
      const double oracle = negative_moment_oracle(pair.B(), g);
      auto get = [&](auto fn) -> std::optional<double> {
        try {
          return fn().bound;
        } catch (const DomainError&) {
          return std::nullopt;
        }
      };
      const auto prim = get([&] { return bound_prim(pair, g); });
      const auto ex = get([&] { return bound_exp(pair, g); });
      const auto exhs = get([&] { return bound_exphs(pair, g); });
      bool v = false;
      for (const auto& b : {prim, ex, exhs})
        if (b && *b < oracle * (1.0 - chain_slack)) v = true;
      violated = violated || v;
      table.add({fmt9(g), fmt9(oracle), out_of_domain(prim), out_of_domain(ex), out_of_domain(exhs)});
      csv.add({csv_num(g), csv_num(oracle), csv_num(prim), csv_num(ex), csv_num(exhs), v ? "yes" : "no"});
      auto jo = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
      rows.push_back(json{{"gamma", g}, {"oracle", oracle}, {"prim", jo(prim)}, {"exp", jo(ex)},
                          {"exphs", jo(exhs)}, {"violation", v}});
    }
    table.print(io.out);
    json js{{"command", "bound"}, {"t", t}, {"dim", pair.dim()}, {"trace_norm_D", pair.trace_norm_D()},
            {"hs_norm_D", pair.hs_norm_D()}, {"rows", rows}};
    if (s) {
      if (!(*s > 0.0)) throw DomainError("--s must be > 0");
      std::vector<double> ok_g;
      for (double g : gammas)
        if (g > 1.0) ok_g.push_back(g);
      const long n = count_below(pair.B(), *s);
      io.out << "N(-" << fmt9(*s) << ") = " << n;
      if (!ok_g.empty()) {
        const double nb = counting_bound({pair}, ok_g, *s);
        io.out << " <= " << fmt9(nb);
        js["counting"] = {{"s", *s}, {"count", n}, {"bound", nb}};
        if (nb < n * (1.0 - chain_slack)) violated = true;
      } else {
        io.out << " (no gamma > 1 given for the bound)";
        js["counting"] = {{"s", *s}, {"count", n}, {"bound", nullptr}};
      }
      io.out << '\n';
    }
    emit(c, "bound.csv", csv.str());
    emit(c, "bound.json", js.dump(2) + "\n");
    return violated ? exit_violation : exit_ok;
  });
}

int cmd_schrodinger(const std::string& config_path, const Common& c, Streams io) {
  return guarded(io, [&] {
    const auto cfg = load_config(config_path);
    ReportOptions ro;
    ro.p = cfg.p;
    ro.alpha = cfg.alpha;
    ro.c = cfg.c;
    ro.lt_constant = cfg.lt_constant;
    ro.lt_semiclassical = cfg.lt_semiclassical;
    ro.slack = cfg.tolerances.slack;
    ro.max_points = cfg.max_points;
    std::vector<BoundReport> reports(cfg.gammas.size());
    parallel_for(static_cast<int>(cfg.gammas.size()), c.jobs,
                 [&](int i) { reports[i] = bound_report(cfg.potential, cfg.grid, cfg.gammas[i], ro); });

    Table table({"gamma", "theorem", "bound", "oracle", "status"});
    Csv csv({"potential", "d", "gamma", "theorem", "bound", "oracle_moment", "c", "c_choice", "beta", "t", "delta",
             "kappa", "alpha", "p", "norm_L1", "norm_L2", "norm_Lp", "norm_Kalpha", "status", "error"});
    const std::string pname = to_string(cfg.potential.kind);
    bool violated = false;
    json jr = json::array();
    for (const auto& r : reports) {
      violated = violated || !r.ok();
      for (const auto& e : r.bounds) {
        const std::string status = !e.error.empty() ? "domain" : (e.violated ? "VIOLATION" : "ok");
        table.add({fmt9(r.gamma), e.bound.theorem, e.error.empty() ? fmt9(e.bound.value) : "-",
                   fmt9(r.oracle_moment), status});
        const auto& b = e.bound;
        csv.add({pname, std::to_string(cfg.potential.d), csv_num(r.gamma), b.theorem,
                 e.error.empty() ? csv_num(b.value) : "", csv_num(r.oracle_moment), csv_num(b.c), b.c_choice,
                 csv_num(b.beta), csv_num(b.t), csv_num(b.delta), csv_num(b.kappa), csv_num(b.alpha), csv_num(b.p),
                 csv_num(b.norm_L1), csv_num(b.norm_L2), csv_num(b.norm_Lp), csv_num(b.norm_Kalpha), status,
                 e.error});
        if (!e.error.empty()) io.err << "gamma " << fmt9(r.gamma) << " " << b.theorem << ": " << e.error << '\n';
      }
      const std::string lt_status = r.lt_error.empty() ? "comparison" : "domain";
      table.add({fmt9(r.gamma), "lieb-thirring", r.lt_error.empty() ? fmt9(r.lieb_thirring) : "-",
                 fmt9(r.oracle_moment), lt_status});
      csv.add({pname, std::to_string(cfg.potential.d), csv_num(r.gamma), "lieb-thirring", csv_num(r.lieb_thirring),
               csv_num(r.oracle_moment), "", r.lt_semiclassical ? "semiclassical constant" : "caller constant", "",
               "", "", csv_num(r.lt_constant), "", "", "", "", "", "", lt_status, r.lt_error});
      jr.push_back(to_json(r));
    }
    table.print(io.out);
    json js{{"command", "schrodinger"}, {"grid", to_json(cfg.grid)}, {"potential", to_json(cfg.potential)},
            {"reports", jr}};
    if (cfg.bridge_grid) {
      json jb = json::array();
      for (double g : cfg.gammas) {
        const auto br = end_to_end_matrix_check(cfg.potential, *cfg.bridge_grid, g, cfg.t_grid,
                                                cfg.tolerances.quadrature);
        for (const auto& row : br.rows)
          io.out << "bridge gamma " << fmt9(g) << " t " << fmt9(row.t) << ": residual " << fmt9(row.residual)
                 << " (tol " << fmt9(row.residual_tol) << "), bounds " << (row.bounds_ok ? "ok" : "VIOLATED")
                 << '\n';
        violated = violated || !br.ok();
        jb.push_back(to_json(br));
      }
      js["bridge"] = {{"grid", to_json(*cfg.bridge_grid)}, {"reports", jb}};
    }
    emit(c, "schrodinger.csv", csv.str());
    emit(c, "schrodinger.json", js.dump(2) + "\n");
    return violated ? exit_violation : exit_ok;
  });
}

int cmd_scaling_scan(const std::string& config_path, const std::vector<double>& mu, const Common& c, Streams io) {
  return guarded(io, [&] {
    const auto cfg = load_config(config_path);
    if (!cfg.p) throw ConfigError("config field 'p': required for scaling-scan");
    if (mu.size() < 2) throw DomainError("--mu needs at least two values");
    if (cfg.gammas.size() != 1) throw ConfigError("config field 'gammas': scaling-scan takes exactly one gamma");
    const double g = cfg.gammas[0];
    const double C = cfg.lt_semiclassical ? semiclassical_lt_constant(cfg.potential.d, g) : cfg.lt_constant;
    std::vector<MuScanRow> rows(mu.size());
    parallel_for(static_cast<int>(mu.size()), c.jobs, [&](int i) {
      rows[i] = mu_scan_row(cfg.potential, cfg.grid, g, *cfg.p, mu[i], C, true, cfg.max_points);
    });
    const auto res = summarize_mu_scan(rows, cfg.potential.d, g, *cfg.p);
    Table table({"mu", "our_bound", "lt_rhs", "oracle"});
    Csv csv({"mu", "our_bound", "lt_rhs", "oracle_moment", "norm_L1", "norm_Lp", "violation"});
    bool violated = false;
    for (const auto& r : res.rows) {
      const bool v = r.oracle_moment && r.our_bound < *r.oracle_moment * (1.0 - cfg.tolerances.slack);
      violated = violated || v;
      table.add({fmt9(r.mu), fmt9(r.our_bound), fmt9(r.lt_rhs), r.oracle_moment ? fmt9(*r.oracle_moment) : "-"});
      csv.add({csv_num(r.mu), csv_num(r.our_bound), csv_num(r.lt_rhs), csv_num(r.oracle_moment), csv_num(r.norm_L1),
               csv_num(r.norm_Lp), v ? "yes" : "no"});
    }
    table.print(io.out);
    io.out << "slope(our_bound) = " << fmt9(res.slope_our) << " (expected " << fmt9(res.expected_slope)
           << ", norm scaling law " << fmt9(res.scaling_law_slope) << ")\n"
           << "slope(lt_rhs) = " << fmt9(res.slope_lt) << "\n"
           << "curves cross: " << (res.curves_cross ? "yes" : "no") << '\n';
    json js = to_json(res);
    js["command"] = "scaling-scan";
    js["gamma"] = g;
    js["p"] = *cfg.p;
    js["lt_constant"] = C;
    js["lt_constant_source"] = cfg.lt_semiclassical ? "semiclassical (external)" : "caller-supplied";
    js["grid"] = to_json(cfg.grid);
    js["potential"] = to_json(cfg.potential);
    emit(c, "scaling.csv", csv.str());
    emit(c, "scaling.json", js.dump(2) + "\n");
    return violated ? exit_violation : exit_ok;
  });
}

}  // namespace semibound::cli
