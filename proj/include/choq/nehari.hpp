#pragma once

#include <array>
#include <utility>

#include "choq/functional.hpp"

namespace choq {

struct FiberingPoint {
  double t_plus = 0;
  double t_minus = 0;
  double value = 0;  // fibering energy at the returned point
  bool converged = false;
  int iterations = 0;
};

// Scalar data of the fibering energy along (t+, t-) for a fixed disjoint pair:
//   E(t+,t-) = t+^{2/p}/2 A+ + t-^{2/p}/2 A- - t+^{1/p} t-^{1/p} X
//              - (1/2p) (t+^2 D+ + 2 t+ t- Dx + t-^2 D-).
// X is the discrete H^1 cross pairing of w+ and w-. It vanishes for H^1
// functions with disjoint supports; on the grid carrying it along keeps
// E(t+,t-) = action(t+^{1/p} w+ - t-^{1/p} w-) exact, so stationarity of E is
// the same thing as vanishing nodal residuals of the projected field.
struct FiberingScalars {
  double a_plus = 0, a_minus = 0, h1_cross = 0;
  double d_plus = 0, d_minus = 0, d_cross = 0;
  double p = 2;

  double energy(double tp, double tm) const;
  std::array<double, 2> grad(double tp, double tm) const;
  std::array<double, 3> hess(double tp, double tm) const;  // (pp, pm, mm)
};

struct FiberingData {
  FiberingScalars s;
  Field conv_plus;   // K * |w+|^p
  Field conv_minus;  // K * |w-|^p
};

// Validates w+/- >= 0 with disjoint supports, then assembles the scalars
// (two convolutions, one spectral gram).
FiberingData fibering_data(const Field& w_plus, const Field& w_minus, const Params& prm);

// Rescaling onto the Nehari manifold: t = (||u||_{H1}^2 / D(u))^{1/(2p-2)}.
std::pair<double, Field> scalar_project(const Field& u, const Params& prm);

double fibering_energy(const Field& w_plus, const Field& w_minus, double t_plus, double t_minus,
                       const Params& prm);

// Interior maximizer of the concave fibering energy (p >= 2): damped Newton
// from the decoupled scalar projections, coarse log-grid fallback. A
// non-converged result signals a boundary/degenerate maximizer.
FiberingPoint fibering_maximize(const Field& w_plus, const Field& w_minus, const Params& prm);
FiberingPoint maximize(const FiberingScalars& s);

}  // namespace choq
