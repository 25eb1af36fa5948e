#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "choq/runconfig.hpp"

int main(int argc, char** argv) {
  CLI::App app{"choquard: groundstates and least-action nodal solutions of the Choquard equation"};
  app.require_subcommand(1);

  std::string config_path;
  auto* gs = app.add_subcommand("groundstate", "minimize the action over the Nehari manifold");
  auto* nod = app.add_subcommand("nodal", "least-action sign-changing solution (p > 2)");
  auto* cont = app.add_subcommand("continuation", "nodal solves down a p-schedule with a p = 2 polish");
  auto* lev = app.add_subcommand("levels", "groundstate level c0(p) over a list of exponents");
  for (auto* sub : {gs, nod, cont, lev})
    sub->add_option("--config", config_path, "JSON run configuration")->required();

  auto* val = app.add_subcommand("validate", "recompute energies and diagnostics of a stored field");
  std::string field_path, val_config;
  int val_dim = 0;
  double val_alpha = 0, val_p = 0;
  val->add_option("--field", field_path, "CHQF field file")->required();
  val->add_option("--config", val_config, "config carrying problem parameters");
  val->add_option("--dim", val_dim, "dimension (with --alpha/--p instead of --config)");
  val->add_option("--alpha", val_alpha, "Riesz order");
  val->add_option("--p", val_p, "exponent");
  std::string val_out;
  val->add_option("--output", val_out, "directory for validate_report.json");

  auto* bench = app.add_subcommand("convolve-bench", "FFT convolution vs direct-sum oracle");
  int b_dim = 3, b_m = 64;
  double b_alpha = 0, b_box = 16.0;
  std::uint64_t b_seed = 12345;
  bench->add_option("--dim", b_dim, "dimension")->required();
  bench->add_option("--M", b_m, "points per axis")->required();
  bench->add_option("--alpha", b_alpha, "Riesz order (default dim/2)");
  bench->add_option("--L", b_box, "box length");
  bench->add_option("--seed", b_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (gs->parsed()) return choq::run_groundstate(choq::load_config(config_path, "groundstate"));
    if (nod->parsed()) return choq::run_nodal(choq::load_config(config_path, "nodal"));
    if (cont->parsed()) return choq::run_continuation(choq::load_config(config_path, "continuation"));
    if (lev->parsed()) return choq::run_levels(choq::load_config(config_path, "levels"));
    if (val->parsed()) {
      choq::RunConfig rc;
      if (!val_config.empty()) {
        rc = choq::load_config(val_config, "validate");
      } else {
        if (val_dim == 0 || val_alpha == 0 || val_p == 0)
          throw choq::ConfigError("validate needs --config or all of --dim/--alpha/--p");
        rc.mode = "validate";
        rc.prm = {val_dim, val_alpha, val_p};
        rc.prm.validate();
        rc.output_dir.clear();
      }
      rc.field_path = field_path;
      if (!val_out.empty()) rc.output_dir = val_out;
      return choq::run_validate(rc);
    }
    if (bench->parsed()) {
      if (b_alpha == 0) b_alpha = b_dim / 2.0;
      return choq::run_convolve_bench(b_dim, b_m, b_alpha, b_box, b_seed);
    }
  } catch (const choq::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 2;
  }
  return 3;
}
