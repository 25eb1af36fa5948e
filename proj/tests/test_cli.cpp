#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "choq/field_io.hpp"
#include "choq/runconfig.hpp"

using namespace choq;
namespace fs = std::filesystem;

namespace {

fs::path sandbox() {
  static fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "choq_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

std::string write_config(const std::string& name, const std::string& body) {
  fs::path p = sandbox() / name;
  std::ofstream f(p);
  f << body;
  return p.string();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CHOQ_CLI_PATH) + " " + args + " >" +
                    (sandbox() / "stdout.txt").string() + " 2>" + (sandbox() / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("load_config: validation errors carry the admissibility window") {
  std::string bad_p = write_config("bad_p.json", R"({
    "problem": {"dim": 3, "alpha": 2.0, "p": 5.0},
    "grid": {"M": 16, "L": 12.0}
  })");
  try {
    load_config(bad_p, "groundstate");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("admissible window") != std::string::npos);
    CHECK(msg.find("1.6666") != std::string::npos);
    CHECK(msg.find("5") != std::string::npos);
  }

  std::string ok = write_config("ok.json", R"({
    "problem": {"dim": 3, "alpha": 2.0, "p": 2.0},
    "grid": {"M": 16, "L": 12.0}
  })");
  CHECK_NOTHROW(load_config(ok, "groundstate"));  // p=2 admissible for alpha > (N-4)+

  std::string missing = write_config("missing.json", R"({
    "problem": {"dim": 1, "alpha": 0.5, "p": 2.5}
  })");
  CHECK_THROWS_AS(load_config(missing, "groundstate"), ConfigError);
  CHECK_THROWS_AS(load_config((sandbox() / "nope.json").string(), "groundstate"), ConfigError);

  std::string badm = write_config("badm.json", R"({
    "problem": {"dim": 1, "alpha": 0.5, "p": 2.5},
    "grid": {"M": 24, "L": 12.0}
  })");
  CHECK_THROWS_AS(load_config(badm, "groundstate"), ConfigError);
}

TEST_CASE("load_config: canonical dump round-trips") {
  std::string src = write_config("round.json", R"({
    "problem": {"dim": 1, "alpha": 0.5, "p": 2.5},
    "grid": {"M": 64, "L": 20.0},
    "solver": {"grad_tol": 1e-7},
    "seed": 99,
    "output_dir": "outdir"
  })");
  RunConfig rc = load_config(src, "groundstate");
  CHECK(rc.solver.grad_tol == 1e-7);
  CHECK(rc.seed == 99);
  std::string dumped = write_config("round2.json", dump_config(rc));
  RunConfig rc2 = load_config(dumped, "groundstate");
  CHECK(rc2.prm.p == rc.prm.p);
  CHECK(rc2.grid_m == rc.grid_m);
  CHECK(rc2.grid_l == rc.grid_l);
  CHECK(rc2.solver.grad_tol == rc.solver.grad_tol);
  CHECK(rc2.seed == rc.seed);
  CHECK(rc2.output_dir == rc.output_dir);
}

TEST_CASE("cli: groundstate run writes field and report, validate reads them back") {
  fs::path out = sandbox() / "gs_out";
  std::string cfg = write_config("gs.json", R"({
    "problem": {"dim": 1, "alpha": 0.5, "p": 2.5},
    "grid": {"M": 128, "L": 30.0},
    "output_dir": ")" + out.string() + R"("
  })");
  CHECK(run_cli("groundstate --config " + cfg) == 0);
  CHECK(fs::exists(out / "groundstate.chqf"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "config.json"));

  Field u = read_field((out / "groundstate.chqf").string());
  CHECK(u.grid.m == 128);

  CHECK(run_cli("validate --field " + (out / "groundstate.chqf").string() +
                " --dim 1 --alpha 0.5 --p 2.5") == 0);
  std::string text = slurp(sandbox() / "stdout.txt");
  CHECK(text.find("pohozaev_residual") != std::string::npos);
  CHECK(text.find("sign_change") != std::string::npos);
  CHECK(text.find("h1_norm_sq") != std::string::npos);
}

TEST_CASE("cli: exit codes for config errors and bad invocations") {
  CHECK(run_cli("groundstate --config /nonexistent.json") == 3);
  std::string bad = write_config("bad_window.json", R"({
    "problem": {"dim": 3, "alpha": 2.0, "p": 5.0},
    "grid": {"M": 16, "L": 12.0}
  })");
  CHECK(run_cli("groundstate --config " + bad) == 3);
  CHECK(run_cli("frobnicate") == 3);
  CHECK(run_cli("groundstate") == 3);  // missing --config
}

TEST_CASE("cli: convolve-bench prints oracle error") {
  CHECK(run_cli("convolve-bench --dim 1 --M 64 --alpha 0.5") == 0);
  std::string text = slurp(sandbox() / "stdout.txt");
  CHECK(text.find("max relative error") != std::string::npos);
}

TEST_CASE("cli: levels runs are deterministic byte for byte") {
  fs::path out1 = sandbox() / "lv1", out2 = sandbox() / "lv2";
  auto cfg_for = [&](const fs::path& out) {
    return R"({
      "problem": {"dim": 1, "alpha": 0.5, "p_values": [2.2, 2.4]},
      "grid": {"M": 64, "L": 24.0},
      "seed": 7,
      "output_dir": ")" + out.string() + R"("
    })";
  };
  std::string c1 = write_config("lv1.json", cfg_for(out1));
  std::string c2 = write_config("lv2.json", cfg_for(out2));
  REQUIRE(run_cli("levels --config " + c1) == 0);
  REQUIRE(run_cli("levels --config " + c2) == 0);
  std::string csv1 = slurp(out1 / "levels.csv"), csv2 = slurp(out2 / "levels.csv");
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("p,c0_p\n", 0) == 0);
}
