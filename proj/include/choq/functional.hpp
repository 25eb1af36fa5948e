#pragma once

#include "choq/grid.hpp"
#include "choq/params.hpp"
#include "choq/riesz.hpp"

namespace choq {

// All pieces of the action at a field u, plus the Nehari pairings. The nodal
// residuals are the weak-form pairings of the Euler operator against u+ and
// -u-, so nehari_residual = nodal_residual_plus + nodal_residual_minus holds
// identically on the grid.
struct EnergyBreakdown {
  double h1_norm_sq = 0;            // \int |grad u|^2 + u^2
  double interaction = 0;           // D(u) = \int (I_a * |u|^p) |u|^p
  double action = 0;                // h1/2 - D/(2p)
  double nehari_residual = 0;       // h1 - D
  double nodal_residual_plus = 0;   // <A'(u), u+>
  double nodal_residual_minus = 0;  // -<A'(u), u->
};

double action(const Field& u, const Params& prm);
double interaction(const Field& u, const Params& prm);  // D(u)
// D(f, g) = \int (I_a * |f|^p) |g|^p; symmetric by kernel self-adjointness.
double interaction_cross(const Field& f, const Field& g, const Params& prm);

// Euler operator R(u) = (-Lap + 1) u - (I_a * |u|^p) |u|^{p-2} u, so that
// <A'(u), phi> = integrate(R(u) phi). Requires p >= 2.
Field gradient(const Field& u, const Params& prm);
// (-Lap + 1)^{-1} R(u): the H^1 Riesz representative of the derivative,
// h1_inner(g, phi) = integrate(R(u) phi).
Field sobolev_gradient(const Field& u, const Params& prm);

// (1/2 - 1/2p) ||u||_{H1}^{2p/(p-1)} / D(u)^{1/(p-1)}; scale invariant, and
// its infimum over nonzero u is the groundstate level.
double groundstate_quotient(const Field& u, const Params& prm);

EnergyBreakdown energy_breakdown(const Field& u, const Params& prm);

// Variants reusing an already computed convolution K * |u|^p.
Field gradient_with(const Field& u, const Field& conv_up, const Params& prm);
EnergyBreakdown energy_breakdown_with(const Field& u, const Field& conv_up, const Params& prm);

}  // namespace choq
