#include "choq/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "choq/spectral.hpp"

namespace choq {

namespace {

double dot_integral(const Field& a, const Field& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s) * a.grid.cell_volume();
}

}  // namespace

double interaction(const Field& u, const Params& prm) {
  auto k = kernel_for(u.grid, prm.alpha);
  Field up = pow_abs(u, prm.p);
  Field conv = convolve(*k, up);
  return dot_integral(conv, up);
}

double interaction_cross(const Field& f, const Field& g, const Params& prm) {
  require_same_grid(f, g, "interaction_cross");
  auto k = kernel_for(f.grid, prm.alpha);
  Field fp = pow_abs(f, prm.p);
  Field conv = convolve(*k, fp);
  return dot_integral(conv, pow_abs(g, prm.p));
}

double action(const Field& u, const Params& prm) {
  double h1 = h1_inner(u, u);
  return 0.5 * h1 - interaction(u, prm) / (2.0 * prm.p);
}

Field gradient_with(const Field& u, const Field& conv_up, const Params& prm) {
  Field r = spectral::helmholtz(u);
  Field nl = sign_pow(u, prm.p - 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= conv_up[i] * nl[i];
  return r;
}

Field gradient(const Field& u, const Params& prm) {
  if (prm.p < 2.0) throw std::domain_error("gradient: |u|^{p-2}u is not differentiable at 0 for p < 2");
  auto k = kernel_for(u.grid, prm.alpha);
  Field conv = convolve(*k, pow_abs(u, prm.p));
  return gradient_with(u, conv, prm);
}

Field sobolev_gradient(const Field& u, const Params& prm) {
  auto k = kernel_for(u.grid, prm.alpha);
  Field conv = convolve(*k, pow_abs(u, prm.p));
  Field nl = sign_pow(u, prm.p - 1.0);
  for (std::size_t i = 0; i < nl.size(); ++i) nl[i] *= conv[i];
  Field g = spectral::helmholtz_inverse(nl);
  // g = u - (-Lap+1)^{-1}[(I_a*|u|^p)|u|^{p-2}u], exact in the u-component.
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = u[i] - g[i];
  return g;
}

double groundstate_quotient(const Field& u, const Params& prm) {
  double h1 = h1_inner(u, u);
  if (h1 == 0.0) throw std::domain_error("groundstate_quotient: u = 0");
  double d = interaction(u, prm);
  if (!(d > 0)) throw std::domain_error("groundstate_quotient: interaction is not positive");
  double p = prm.p;
  return (0.5 - 0.5 / p) * std::pow(h1, p / (p - 1.0)) / std::pow(d, 1.0 / (p - 1.0));
}

EnergyBreakdown energy_breakdown_with(const Field& u, const Field& conv_up, const Params& prm) {
  EnergyBreakdown eb;
  auto [uplus, uminus] = split_signs(u);
  auto g = spectral::h1_gram(u, uplus);
  eb.h1_norm_sq = g.uu;
  const double h1_up = g.uv;
  const double h1_um = h1_up - g.uu;  // <u, u-> since u- = u+ - u

  Field pp = pow_abs(uplus, prm.p);
  Field pm = pow_abs(uminus, prm.p);
  const double d_plus = dot_integral(conv_up, pp);
  const double d_minus = dot_integral(conv_up, pm);
  eb.interaction = d_plus + d_minus;  // |u|^p = |u+|^p + |u-|^p pointwise

  eb.action = 0.5 * eb.h1_norm_sq - eb.interaction / (2.0 * prm.p);
  eb.nehari_residual = eb.h1_norm_sq - eb.interaction;
  eb.nodal_residual_plus = h1_up - d_plus;
  eb.nodal_residual_minus = -h1_um - d_minus;
  return eb;
}

EnergyBreakdown energy_breakdown(const Field& u, const Params& prm) {
  auto k = kernel_for(u.grid, prm.alpha);
  Field conv = convolve(*k, pow_abs(u, prm.p));
  return energy_breakdown_with(u, conv, prm);
}

}  // namespace choq
