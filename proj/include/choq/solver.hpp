#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choq/functional.hpp"
#include "choq/nehari.hpp"

namespace choq {

struct SolveConfig {
  int max_iters = 4000;
  double grad_tol = 1e-8;         // relative H^1 norm of the Sobolev gradient
  double step_init = 1.0;
  double backtrack_factor = 0.5;
  double degenerate_tol = 1e-6;   // minimal relative H^1 norm of a sign part
  double seed_offset = 0;         // initial bump separation; 0 means L/4
};

struct SolveReport {
  double level = 0;
  EnergyBreakdown energy;
  double residual = 0;
  double pohozaev_residual = 0;
  int iterations = 0;
  double p = 0;
  double alpha = 0;
  std::string field_path;
  bool converged = false;
  std::string status;  // "converged", "max_iters", "degenerate_sign_part", ...
};

struct SolveResult {
  SolveReport report;
  Field u;
  std::vector<double> action_trace;  // action after every accepted descent step
};

// Groundstate: projected Sobolev-gradient descent with backtracking on the
// action, rescaled onto the Nehari manifold and made nonnegative after every
// step; a Newton polish drives the residual to grad_tol at the end.
SolveResult groundstate_solve(const Params& prm, const SolveConfig& cfg, const Grid& grid,
                              const Field* seed = nullptr);

// Least-action sign-changing solution for p > 2: per iteration split the
// signs, guard against a vanishing part, re-project through the fibering
// maximizer, then take a backtracked Sobolev-gradient step. Without a warm
// start the seed is a groundstate copy at +offset e1 minus one at -offset e1.
SolveResult nodal_solve(const Params& prm, const SolveConfig& cfg, const Grid& grid,
                        const Field* warm_start = nullptr);

// Runs nodal_solve down a strictly decreasing schedule of p > 2 values
// (last one <= 2.02), warm-starting each solve from the previous solution,
// then appends a p = 2 report obtained by polishing the last iterate without
// any nodal-set machinery.
std::vector<SolveResult> continuation_run(const Params& params_base, const SolveConfig& cfg,
                                          const Grid& grid, const std::vector<double>& p_schedule);

// Groundstate level for each p, independently; output sorted by p.
std::vector<SolveResult> level_curve(const Params& params_base, const SolveConfig& cfg,
                                     const Grid& grid, std::vector<double> p_values);

// Unconstrained matrix-free Gauss-Newton on the H^1-preconditioned residual;
// used as the endgame of both solvers and as the p = 2 polish.
struct PolishOutcome {
  Field u;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};
PolishOutcome newton_polish(Field u, const Params& prm, double tol, int max_outer = 30);

// Fraction of the L^2 mass outside |x| > L/4 (the box-size adequacy check).
double tail_mass_fraction(const Field& u);

}  // namespace choq
