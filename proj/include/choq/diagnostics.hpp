#pragma once

#include <utility>

#include "choq/grid.hpp"
#include "choq/params.hpp"

namespace choq {

struct SolveReport;  // solver.hpp

struct DiagnosticsReport {
  double pohozaev_residual = 0;
  double hls_ratio = 0;
  bool sign_change = false;
  double level_gap = 0;         // 2 c_0 - c_nod
  double nodal_norm_floor = 0;  // min(||u+||, ||u-||) / ||u|| in H^1
  bool ordering_ok = false;     // c_0 < c_nod < 2 c_0
};

// Relative defect of the scaling identity
//   (N-2)/2 \int |grad u|^2 + N/2 \int u^2 = (N+alpha)/(2p) D(u),
// which exact solutions satisfy; discretization error makes it a useful
// convergence diagnostic.
double pohozaev_residual(const Field& u, const Params& prm);

// D(v) / (\int |v|^{2Np/(N+alpha)})^{(N+alpha)/N}: the diagonal interaction
// bound ratio. Invariant under v -> lambda v; finite uniformly over
// reasonable field families.
double hls_ratio(const Field& v, const Params& prm);

DiagnosticsReport verify_level_inequalities(const SolveReport& groundstate,
                                            const SolveReport& nodal, const Field& nodal_field,
                                            double degenerate_tol = 1e-6);

// Exploratory check for p < 2: on the fiber of a far-separated pair built
// from a groundstate-like profile, the stationarity system has a second
// solution with a vanishingly small negative part; the energy there is an
// upper bound for the nodal level that collapses onto the single-bump level.
// Returns (single-bump level estimate, nodal level upper bound); uses only
// the quotient and the fibering scalars, no gradients.
std::pair<double, double> subcritical_level_check(const Field& profile, const Params& prm);

}  // namespace choq
