#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "semibound/constants.hpp"

using namespace semibound::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("semibound_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
  std::string read(const std::string& name) const {
    std::ifstream in(path / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

template <class F>
Run run(F f) {
  std::ostringstream out, err;
  const int code = f(Streams{out, err});
  return {code, out.str(), err.str()};
}

Common to(const TempDir& d, const std::string& sub = "") {
  Common c;
  c.out = (d.path / sub).string();
  c.jobs = 2;
  return c;
}

const char* well_config = R"({
  "grid": {"d": 1, "L": 5.0, "n": 400},
  "potential": {"kind": "square_well", "amplitude": 10.0, "radius": 1.0},
  "gammas": [2.5, 3.0],
  "alpha": 0.5,
  "p": 3.0
})";

}  // namespace

TEST_CASE("constants command marks out-of-domain cells") {
  TempDir d;
  auto r = run([&](Streams io) { return cmd_constants({1.5, 2.0}, 1e-8, to(d), io); });
  CHECK(r.code == exit_ok);
  std::istringstream lines(r.out);
  std::string header, row15, row2;
  std::getline(lines, header);
  std::getline(lines, row15);
  std::getline(lines, row2);
  CHECK(row15.find("out-of-domain") != std::string::npos);
  CHECK(row2.find("0.647") != std::string::npos);

  const auto js = json::parse(d.read("constants.json"));
  CHECK(js["rows"][0]["C_HS"].is_null());
  CHECK(js["rows"][0]["prim_constant"].is_null());
  CHECK(js["rows"][1]["lower_bound"].get<double>() == doctest::Approx(0.6476).epsilon(2e-3));
  CHECK(d.read("constants.csv").rfind("gamma,C_tr,C_HS,", 0) == 0);
}

TEST_CASE("constants command gamma = 2 row stays below 2.5") {
  // Expected to fail: the computed C_tr(2) is 2.6075.
  TempDir d;
  run([&](Streams io) { return cmd_constants({2.0}, 1e-8, to(d), io); });
  const auto js = json::parse(d.read("constants.json"));
  CHECK(js["rows"][0]["C_tr"].get<double>() <= 2.525);
}

TEST_CASE("constants command is byte-for-byte reproducible") {
  TempDir d;
  auto a = run([&](Streams io) { return cmd_constants({1.5, 2.5, 3.0}, 1e-8, to(d, "a"), io); });
  Common one = to(d, "b");
  one.jobs = 1;
  auto b = run([&](Streams io) { return cmd_constants({1.5, 2.5, 3.0}, 1e-8, one, io); });
  CHECK(a.out == b.out);
  CHECK(d.read("a/constants.csv") == d.read("b/constants.csv"));
  CHECK(d.read("a/constants.json") == d.read("b/constants.json"));
}

TEST_CASE("constants command exits 1 when nothing is defined") {
  auto r = run([&](Streams io) { return cmd_constants({0.5, 2.0}, 1e-8, Common{}, io); });
  CHECK(r.code == exit_error);
  CHECK(r.err.find("gamma = 0.5") != std::string::npos);
}

TEST_CASE("verify identity-tr passes") {
  TempDir d;
  auto r = run([&](Streams io) { return cmd_verify("identity-tr", 6, 10, {2.0}, 1, 1e-8, to(d), io); });
  CHECK(r.code == exit_ok);
  const auto js = json::parse(d.read("verify.json"));
  CHECK(js["summary"]["violations"] == 0);
  CHECK(js["summary"]["ok"] == 10);
  for (const auto& row : js["rows"])
    CHECK(row["residual"].get<double>() <= std::max(1e-6, 1e-4 * row["oracle"].get<double>()));
}

TEST_CASE("verify chain-hs has no violations") {
  TempDir d;
  auto r = run([&](Streams io) { return cmd_verify("chain-hs", 5, 6, {2.5}, 3, 1e-8, to(d), io); });
  CHECK(r.code == exit_ok);
  CHECK(json::parse(d.read("verify.json"))["summary"]["violations"] == 0);
}

TEST_CASE("verify with zero trials") {
  TempDir d;
  auto r = run([&](Streams io) { return cmd_verify("chain-tr", 4, 0, {2.0}, 3, 1e-8, to(d), io); });
  CHECK(r.code == exit_ok);
  const std::string csv = d.read("verify.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
}

TEST_CASE("verify output does not depend on the worker count") {
  TempDir d;
  Common one = to(d, "a"), four = to(d, "b");
  one.jobs = 1;
  four.jobs = 4;
  run([&](Streams io) { return cmd_verify("chain-tr", 4, 5, {1.5, 3.0}, 9, 1e-8, one, io); });
  run([&](Streams io) { return cmd_verify("chain-tr", 4, 5, {1.5, 3.0}, 9, 1e-8, four, io); });
  CHECK(d.read("a/verify.csv") == d.read("b/verify.csv"));
}

TEST_CASE("verify rejects bad arguments") {
  CHECK(run([](Streams io) { return cmd_verify("identity-tr", 17, 1, {2.0}, 1, 1e-8, Common{}, io); }).code ==
        exit_error);
  CHECK(run([](Streams io) { return cmd_verify("bogus", 4, 1, {2.0}, 1, 1e-8, Common{}, io); }).code == exit_error);
}

TEST_CASE("bound command on the scalar pair") {
  TempDir d;
  const auto a = d.file("a.txt", "dim 1\n0\n");
  const auto b = d.file("b.txt", "dim 1\n-1\n");
  auto r = run([&](Streams io) { return cmd_bound(a, b, 1.0, {2.0}, 0.5, to(d), io); });
  CHECK(r.code == exit_ok);
  const auto js = json::parse(d.read("bound.json"));
  const auto& row = js["rows"][0];
  CHECK(row["oracle"].get<double>() == doctest::Approx(1.0));
  CHECK(row["exp"].get<double>() ==
        doctest::Approx(semibound::constant_tr(2.0) * (std::numbers::e - 1.0)).epsilon(1e-12));
  CHECK(row["exphs"].is_null());
  CHECK(row["prim"].is_null());
  CHECK(r.out.find("out-of-domain") != std::string::npos);
  CHECK(js["counting"]["count"] == 1);
  CHECK(js["counting"]["bound"].get<double>() >= 1.0);
}

TEST_CASE("bound command with A = B gives zeros") {
  TempDir d;
  const auto a = d.file("a.txt", "dim 2\n1 0.5\n0.5 2\n");
  auto r = run([&](Streams io) { return cmd_bound(a, a, 1.0, {3.0}, std::nullopt, to(d), io); });
  CHECK(r.code == exit_ok);
  const auto row = json::parse(d.read("bound.json"))["rows"][0];
  CHECK(row["oracle"] == 0.0);
  CHECK(row["prim"] == 0.0);
  CHECK(row["exp"] == 0.0);
  CHECK(row["exphs"] == 0.0);
}

TEST_CASE("bound command names a failed hypothesis") {
  TempDir d;
  const auto a = d.file("a.txt", "dim 1\n-1\n");
  auto r = run([&](Streams io) { return cmd_bound(a, a, 1.0, {2.0}, std::nullopt, Common{}, io); });
  CHECK(r.code == exit_error);
  CHECK(r.err.find("hypothesis") != std::string::npos);
}

TEST_CASE("schrodinger command on a 1-D well") {
  TempDir d;
  const auto cfg = d.file("well.json", well_config);
  auto r = run([&](Streams io) { return cmd_schrodinger(cfg, to(d), io); });
  CHECK(r.code == exit_ok);
  // cor2 and cor22 need d >= 3: reported per row, the run continues.
  CHECK(r.err.find("requires d >= 3") != std::string::npos);
  const auto js = json::parse(d.read("schrodinger.json"));
  for (const auto& rep : js["reports"]) {
    CHECK(rep["ok"] == true);
    for (const auto& b : rep["bounds"])
      if (b["error"].is_null()) CHECK(b["value"].get<double>() >= rep["oracle_moment"].get<double>());
  }
  const std::string csv = d.read("schrodinger.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 7);
}

TEST_CASE("schrodinger command with a matrix bridge") {
  TempDir d;
  const auto cfg = d.file("bridge.json", R"({
    "grid": {"d": 1, "L": 5.0, "n": 200},
    "potential": {"kind": "gaussian_well", "amplitude": 4.0, "radius": 1.0},
    "gammas": [2.5],
    "t_grid": [0.1, 0.3],
    "bridge_grid": {"d": 1, "n": 60}
  })");
  auto r = run([&](Streams io) { return cmd_schrodinger(cfg, to(d), io); });
  CHECK(r.code == exit_ok);
  CHECK(json::parse(d.read("schrodinger.json"))["bridge"]["reports"][0]["ok"] == true);
}

TEST_CASE("config diagnostics") {
  CHECK_THROWS_WITH_AS(parse_config("{\n  \"grid\": {\"d\": 1, \"n\": 10},\n  oops\n}"),
                       doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"grid": {"d": 1, "n": 10}, "potential": {"kind": "square_well", "depth": 1}, "gammas": [3]})"),
      doctest::Contains("potential.depth"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"grid": {"d": 1, "n": 4}, "potential": {"kind": "square_well"}, "gammas": [3]})"),
                       doctest::Contains("grid"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"grid": {"d": 1, "n": 10}, "potential": {"kind": "square_well"}})"),
                       doctest::Contains("gammas"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"grid": {"d": 1, "n": 10}, "potential": {"kind": "square_well"}, "gammas": [3], "bridge_grid": {"d": 1, "n": 10}})"),
      doctest::Contains("t_grid"), ConfigError);
  const auto ok = parse_config(
      R"({"grid": {"d": 3, "n": 10}, "potential": {"kind": "gaussian_well", "radius": 2}, "gammas": [3], "lt_constant": "semiclassical"})");
  CHECK(ok.grid.L == 10.0);
  CHECK(ok.lt_semiclassical);

  TempDir d;
  const auto bad = d.file("bad.json", R"({"grid": {"d": 1, "n": 10}, "potential": {"kind": "square_well"}, "gammas": [3], "extra": 1})");
  auto r = run([&](Streams io) { return cmd_schrodinger(bad, Common{}, io); });
  CHECK(r.code == exit_error);
  CHECK(r.err.find("'extra'") != std::string::npos);
}

TEST_CASE("scaling-scan command") {
  TempDir d;
  const auto cfg = d.file("scan.json", R"({
    "grid": {"d": 3, "L": 4.0, "n": 10},
    "potential": {"kind": "gaussian_well", "amplitude": 0.13, "radius": 1.0},
    "gammas": [3.0],
    "p": 3.0,
    "lt_constant": "semiclassical"
  })");
  auto r = run([&](Streams io) { return cmd_scaling_scan(cfg, {0.5, 1.0, 2.0}, to(d), io); });
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("slope(our_bound)") != std::string::npos);
  const auto js = json::parse(d.read("scaling.json"));
  CHECK(js["rows"].size() == 3);
  CHECK(js["slope_lt"].get<double>() == doctest::Approx(0.0).epsilon(1e-9));

  const auto no_p = d.file("nop.json", R"({"grid": {"d": 3, "n": 10}, "potential": {"kind": "gaussian_well"}, "gammas": [3.0]})");
  auto e = run([&](Streams io) { return cmd_scaling_scan(no_p, {0.5, 1.0}, Common{}, io); });
  CHECK(e.code == exit_error);
  CHECK(e.err.find("'p'") != std::string::npos);
}

TEST_CASE("parallel_for visits each index once") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 7, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
