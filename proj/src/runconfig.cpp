#include "choq/runconfig.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"

#include "choq/diagnostics.hpp"
#include "choq/field_io.hpp"
#include "choq/serialize.hpp"
#include "choq/spectral.hpp"

namespace choq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON (" + path + "): " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object: " + path);
  return j;
}

double need_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing field '" + key + "' in " + where);
  if (!j[key].is_number()) throw ConfigError("field '" + key + "' in " + where + " must be a number");
  return j[key].get<double>();
}

void validate_params(Params prm) {
  try {
    prm.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void write_report_json(const std::string& path, const json& j) { atomic_write(path, j.dump(2) + "\n"); }

void archive_config(const RunConfig& rc) {
  fs::create_directories(rc.output_dir);
  atomic_write((fs::path(rc.output_dir) / "config.json").string(), dump_config(rc));
}

// Adaptive box sizing: double L until the groundstate keeps essentially all
// of its mass inside |x| < L/4. Returns the grid and the last groundstate.
std::pair<Grid, SolveResult> resolve_auto_grid(const RunConfig& rc, double p_for_sizing) {
  Params prm = rc.prm;
  prm.p = p_for_sizing;
  double box = 16.0;
  for (int attempt = 0;; ++attempt, box *= 2.0) {
    Grid g(prm.dim, rc.grid_m, box);
    SolveResult r = groundstate_solve(prm, rc.solver, g);
    double tail = tail_mass_fraction(r.u);
    std::printf("auto_L: L=%g tail_mass=%.3e\n", box, tail);
    if (tail < 1e-8 || attempt >= 3) return {g, std::move(r)};
  }
}

Grid make_grid(const RunConfig& rc, double p_for_sizing) {
  if (!rc.auto_l) return Grid(rc.prm.dim, rc.grid_m, rc.grid_l);
  return resolve_auto_grid(rc, p_for_sizing).first;
}

void print_report(const char* tag, const SolveReport& r) {
  std::printf("%s: p=%g level=%.12g residual=%.3e pohozaev=%.3e iters=%d status=%s\n", tag, r.p,
              r.level, r.residual, r.pohozaev_residual, r.iterations, r.status.c_str());
}

}  // namespace

RunConfig load_config(const std::string& path, const std::string& mode) {
  json j = parse_file(path);
  RunConfig rc;
  rc.mode = mode;
  rc.source_path = path;

  if (j.contains("mode") && j["mode"].get<std::string>() != mode)
    throw ConfigError("config mode '" + j["mode"].get<std::string>() + "' does not match subcommand '" + mode + "'");

  if (!j.contains("problem") || !j["problem"].is_object())
    throw ConfigError("missing 'problem' object in config");
  const json& prob = j["problem"];
  rc.prm.dim = static_cast<int>(need_number(prob, "dim", "problem"));
  rc.prm.alpha = need_number(prob, "alpha", "problem");

  auto read_list = [&](const char* key) {
    std::vector<double> out;
    if (!prob.contains(key) || !prob[key].is_array() || prob[key].empty())
      throw ConfigError(std::string("mode '") + mode + "' needs a non-empty 'problem." + key + "' array");
    for (const auto& x : prob[key]) out.push_back(x.get<double>());
    return out;
  };

  if (mode == "groundstate" || mode == "nodal" || mode == "validate") {
    rc.prm.p = need_number(prob, "p", "problem");
    validate_params(rc.prm);
    if (mode == "nodal" && !(rc.prm.p > 2.0))
      throw ConfigError("mode 'nodal' requires p > 2 (got p = " + fmt(rc.prm.p) + ")");
  } else if (mode == "continuation") {
    rc.p_schedule = read_list("p_schedule");
    for (double p : rc.p_schedule) {
      Params prm = rc.prm;
      prm.p = p;
      validate_params(prm);
    }
    rc.prm.p = rc.p_schedule.front();
  } else if (mode == "levels") {
    rc.p_values = read_list("p_values");
    for (double p : rc.p_values) {
      Params prm = rc.prm;
      prm.p = p;
      validate_params(prm);
    }
    rc.prm.p = rc.p_values.front();
  } else {
    throw ConfigError("unknown mode: " + mode);
  }

  if (mode != "validate") {
    if (!j.contains("grid") || !j["grid"].is_object()) throw ConfigError("missing 'grid' object in config");
    const json& grid = j["grid"];
    rc.grid_m = static_cast<int>(need_number(grid, "M", "grid"));
    rc.auto_l = grid.value("auto_L", false);
    if (!rc.auto_l) rc.grid_l = need_number(grid, "L", "grid");
    if (rc.grid_m < 8 || (rc.grid_m & (rc.grid_m - 1)) != 0)
      throw ConfigError("grid.M must be a power of two >= 8");
    if (!rc.auto_l && !(rc.grid_l > 0)) throw ConfigError("grid.L must be positive");
  } else {
    if (!j.contains("field") || !j["field"].is_string())
      throw ConfigError("mode 'validate' needs a 'field' path in the config");
    rc.field_path = j["field"].get<std::string>();
  }

  if (j.contains("solver")) {
    const json& s = j["solver"];
    rc.solver.max_iters = static_cast<int>(s.value("max_iters", double(rc.solver.max_iters)));
    rc.solver.grad_tol = s.value("grad_tol", rc.solver.grad_tol);
    rc.solver.step_init = s.value("step_init", rc.solver.step_init);
    rc.solver.backtrack_factor = s.value("backtrack_factor", rc.solver.backtrack_factor);
    rc.solver.degenerate_tol = s.value("degenerate_tol", rc.solver.degenerate_tol);
    rc.solver.seed_offset = s.value("seed_offset", rc.solver.seed_offset);
    if (rc.solver.max_iters <= 0 || !(rc.solver.grad_tol > 0) || !(rc.solver.step_init > 0) ||
        !(rc.solver.backtrack_factor > 0 && rc.solver.backtrack_factor < 1) ||
        !(rc.solver.degenerate_tol > 0) || rc.solver.seed_offset < 0)
      throw ConfigError("solver settings out of range");
  }
  rc.seed = static_cast<std::uint64_t>(j.value("seed", 12345.0));
  rc.output_dir = j.value("output_dir", std::string("out"));
  return rc;
}

std::string dump_config(const RunConfig& rc) {
  json j;
  j["mode"] = rc.mode;
  j["problem"] = {{"dim", rc.prm.dim}, {"alpha", rc.prm.alpha}};
  if (rc.mode == "continuation")
    j["problem"]["p_schedule"] = rc.p_schedule;
  else if (rc.mode == "levels")
    j["problem"]["p_values"] = rc.p_values;
  else
    j["problem"]["p"] = rc.prm.p;
  if (rc.mode == "validate") {
    j["field"] = rc.field_path;
  } else {
    j["grid"] = {{"M", rc.grid_m}};
    if (rc.auto_l)
      j["grid"]["auto_L"] = true;
    else
      j["grid"]["L"] = rc.grid_l;
  }
  j["solver"] = {{"max_iters", rc.solver.max_iters},
                 {"grad_tol", rc.solver.grad_tol},
                 {"step_init", rc.solver.step_init},
                 {"backtrack_factor", rc.solver.backtrack_factor},
                 {"degenerate_tol", rc.solver.degenerate_tol},
                 {"seed_offset", rc.solver.seed_offset}};
  j["seed"] = rc.seed;
  j["output_dir"] = rc.output_dir;
  return j.dump(2) + "\n";
}

int run_groundstate(const RunConfig& rc) {
  archive_config(rc);
  SolveResult r;
  Grid g(1, 8, 1.0);
  if (rc.auto_l) {
    auto [grid, result] = resolve_auto_grid(rc, rc.prm.p);
    g = grid;
    r = std::move(result);
  } else {
    g = Grid(rc.prm.dim, rc.grid_m, rc.grid_l);
    r = groundstate_solve(rc.prm, rc.solver, g);
  }
  fs::path dir(rc.output_dir);
  r.report.field_path = (dir / "groundstate.chqf").string();
  write_field(r.report.field_path, r.u);
  write_report_json((dir / "report.json").string(), to_json(r.report));
  print_report("groundstate", r.report);
  return r.report.converged ? 0 : 2;
}

int run_nodal(const RunConfig& rc) {
  archive_config(rc);
  Grid g = make_grid(rc, rc.prm.p);
  SolveResult r = nodal_solve(rc.prm, rc.solver, g);
  fs::path dir(rc.output_dir);
  r.report.field_path = (dir / "nodal.chqf").string();
  write_field(r.report.field_path, r.u);
  write_report_json((dir / "report.json").string(), to_json(r.report));
  print_report("nodal", r.report);
  return r.report.converged ? 0 : 2;
}

int run_continuation(const RunConfig& rc) {
  archive_config(rc);
  Grid g = make_grid(rc, rc.p_schedule.front());
  fs::path dir(rc.output_dir);

  std::vector<SolveResult> nodal = continuation_run(rc.prm, rc.solver, g, rc.p_schedule);

  // Groundstate levels at every schedule point (and p = 2) for the c0 column.
  std::vector<double> ps = rc.p_schedule;
  ps.push_back(2.0);
  std::vector<SolveResult> ground = level_curve(rc.prm, rc.solver, g, ps);
  auto c0_at = [&](double p) {
    for (const auto& r : ground)
      if (r.report.p == p) return r.report.level;
    return 0.0;
  };

  std::string csv = "p,c_nod_p,c0_p,h1_sq,h1_plus,h1_minus,pohozaev_residual\n";
  bool all_ok = true;
  json reports = json::array();
  for (auto& r : nodal) {
    all_ok = all_ok && r.report.converged;
    auto [up, um] = split_signs(r.u);
    auto gram = spectral::h1_gram(up, um);
    csv += fmt(r.report.p) + "," + fmt(r.report.level) + "," + fmt(c0_at(r.report.p)) + "," +
           fmt(r.report.energy.h1_norm_sq) + "," + fmt(std::sqrt(gram.uu)) + "," +
           fmt(std::sqrt(gram.vv)) + "," + fmt(r.report.pohozaev_residual) + "\n";
    print_report("continuation", r.report);
    reports.push_back(to_json(r.report));
  }
  for (const auto& r : ground) all_ok = all_ok && r.report.converged;

  if (!nodal.empty()) {
    std::string fpath = (dir / "p2_solution.chqf").string();
    write_field(fpath, nodal.back().u);
    reports.back()["field_path"] = fpath;
  }
  atomic_write((dir / "continuation.csv").string(), csv);
  write_report_json((dir / "reports.json").string(), reports);
  return all_ok ? 0 : 2;
}

int run_levels(const RunConfig& rc) {
  archive_config(rc);
  Grid g = make_grid(rc, rc.p_values.front());
  std::vector<SolveResult> rs = level_curve(rc.prm, rc.solver, g, rc.p_values);
  std::string csv = "p,c0_p\n";
  json reports = json::array();
  bool all_ok = true;
  for (const auto& r : rs) {
    csv += fmt(r.report.p) + "," + fmt(r.report.level) + "\n";
    reports.push_back(to_json(r.report));
    all_ok = all_ok && r.report.converged;
    print_report("levels", r.report);
  }
  fs::path dir(rc.output_dir);
  atomic_write((dir / "levels.csv").string(), csv);
  write_report_json((dir / "reports.json").string(), reports);
  return all_ok ? 0 : 2;
}

int run_validate(const RunConfig& rc) {
  Field u = read_field(rc.field_path);
  if (u.grid.dim != rc.prm.dim)
    throw ConfigError("field dimension does not match problem.dim");
  EnergyBreakdown eb = energy_breakdown(u, rc.prm);

  DiagnosticsReport d;
  d.pohozaev_residual = pohozaev_residual(u, rc.prm);
  d.hls_ratio = hls_ratio(u, rc.prm);
  auto [up, um] = split_signs(u);
  auto gram = spectral::h1_gram(up, um);
  double h1 = spectral::h1_norm_sq(u);
  d.nodal_norm_floor = std::sqrt(std::min(gram.uu, gram.vv) / h1);
  d.sign_change = std::sqrt(gram.uu / h1) > rc.solver.degenerate_tol &&
                  std::sqrt(gram.vv / h1) > rc.solver.degenerate_tol;

  json out = to_json(d);
  out["energy"] = to_json(eb);
  out["field"] = rc.field_path;
  std::printf("%s\n", out.dump(2).c_str());
  if (!rc.output_dir.empty()) {
    fs::create_directories(rc.output_dir);
    write_report_json((fs::path(rc.output_dir) / "validate_report.json").string(), out);
  }
  return 0;
}

int run_convolve_bench(int dim, int m, double alpha, double box, std::uint64_t seed) {
  Grid g(dim, m, box);
  if (!(alpha > 0 && alpha < dim)) throw ConfigError("convolve-bench: alpha must lie in (0, dim)");
  auto kernel = kernel_for(g, alpha);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field v(g);
  for (auto& x : v.v) x = nd(rng);

  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  Field fast = convolve(*kernel, v);
  auto t1 = clock::now();
  const int reps = 5;
  for (int i = 0; i < reps; ++i) fast = convolve(*kernel, v);
  auto t2 = clock::now();
  double first_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  double avg_ms = std::chrono::duration<double, std::milli>(t2 - t1).count() / reps;
  std::printf("convolve-bench: dim=%d M=%d alpha=%g L=%g\n", dim, m, alpha, box);
  std::printf("fft path: first %.2f ms, warm avg %.2f ms\n", first_ms, avg_ms);

  if (g.size() <= (1u << 16)) {
    auto t3 = clock::now();
    Field slow = convolve_direct(*kernel, v);
    auto t4 = clock::now();
    double ref = linf_norm(slow);
    double err = 0;
    for (std::size_t i = 0; i < slow.size(); ++i)
      err = std::max(err, std::fabs(fast[i] - slow[i]));
    std::printf("direct oracle: %.2f ms, max relative error %.3e\n",
                std::chrono::duration<double, std::milli>(t4 - t3).count(), err / ref);
  } else {
    std::printf("direct oracle skipped (M^N > 2^16)\n");
  }
  return 0;
}

}  // namespace choq
