#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace semibound::cli;

int main(int argc, char** argv) {
  CLI::App app{"Explicit bounds on negative-eigenvalue moments"};
  app.require_subcommand(1);

  Common common;
  common.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Directory for CSV/JSON artifacts");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  std::vector<double> gammas;
  double tol = 1e-8;
  int rc = exit_ok;
  Streams io{std::cout, std::cerr};

  auto* constants = app.add_subcommand("constants", "Tabulate C_tr, C_HS, Gamma*zeta, the lower bound and c1..c6");
  constants->add_option("--gamma", gammas, "gamma values")->required()->delimiter(',');
  constants->add_option("--tol", tol, "Quadrature tolerance");
  add_common(constants);
  constants->callback([&] { rc = cmd_constants(gammas, tol, common, io); });

  std::string mode;
  int dim = 6, trials = 50;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "Random-pair identity and inequality-chain checks");
  verify->add_option("--mode", mode, "identity-tr, identity-hs, chain-tr or chain-hs")->required();
  verify->add_option("--dim", dim, "Matrix dimension")->required();
  verify->add_option("--trials", trials, "Number of random trials")->required();
  verify->add_option("--gamma", gammas, "gamma values")->required()->delimiter(',');
  verify->add_option("--seed", seed, "RNG seed")->required();
  verify->add_option("--tol", tol, "Quadrature tolerance");
  add_common(verify);
  verify->callback([&] { rc = cmd_verify(mode, dim, trials, gammas, seed, tol, common, io); });

  std::string a_path, b_path;
  double t = 1.0;
  std::optional<double> s;
  auto* bound = app.add_subcommand("bound", "Bounds for a user-supplied pair (A, B)");
  bound->add_option("--a", a_path, "Matrix file for A")->required()->check(CLI::ExistingFile);
  bound->add_option("--b", b_path, "Matrix file for B")->required()->check(CLI::ExistingFile);
  bound->add_option("--t", t, "Semigroup time")->required();
  bound->add_option("--gamma", gammas, "gamma values")->required()->delimiter(',');
  bound->add_option("--s", s, "Threshold for the N(-s) bound");
  add_common(bound);
  bound->callback([&] { rc = cmd_bound(a_path, b_path, t, gammas, s, common, io); });

  std::string config;
  auto* schr = app.add_subcommand("schrodinger", "Schrodinger-operator bound report from a JSON config");
  schr->add_option("--config", config, "Config file")->required();
  add_common(schr);
  schr->callback([&] { rc = cmd_schrodinger(config, common, io); });

  std::vector<double> mu;
  auto* scan = app.add_subcommand("scaling-scan", "mu-scaling comparison against Lieb-Thirring");
  scan->add_option("--config", config, "Config file")->required();
  scan->add_option("--mu", mu, "mu values")->required()->delimiter(',');
  add_common(scan);
  scan->callback([&] { rc = cmd_scaling_scan(config, mu, common, io); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }
  return rc;
}
