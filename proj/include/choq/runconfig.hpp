#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "choq/params.hpp"
#include "choq/solver.hpp"

namespace choq {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One run = one JSON config (archived into output_dir alongside the results).
struct RunConfig {
  std::string mode;  // groundstate | nodal | continuation | levels | validate
  Params prm;
  std::vector<double> p_schedule;  // continuation
  std::vector<double> p_values;    // levels
  int grid_m = 64;
  double grid_l = 0;   // ignored when auto_l
  bool auto_l = false;
  SolveConfig solver;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  std::string field_path;  // validate
  std::string source_path; // where the config was loaded from
};

// Parses and fully validates a config for the given mode; error messages for
// exponent violations name the admissibility window.
RunConfig load_config(const std::string& path, const std::string& mode);
std::string dump_config(const RunConfig& rc);  // canonical JSON round-trip

int run_groundstate(const RunConfig& rc);
int run_nodal(const RunConfig& rc);
int run_continuation(const RunConfig& rc);
int run_levels(const RunConfig& rc);
int run_validate(const RunConfig& rc);
int run_convolve_bench(int dim, int m, double alpha, double box, std::uint64_t seed);

}  // namespace choq
