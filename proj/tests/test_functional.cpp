#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

#include "choq/functional.hpp"
#include "choq/nehari.hpp"
#include "choq/spectral.hpp"

using namespace choq;
using namespace choq::testing;

namespace {

// Direct-sum interaction oracle: the convolution through convolve_direct.
double interaction_direct(const Field& u, const Params& prm) {
  auto k = kernel_for(u.grid, prm.alpha);
  Field up = pow_abs(u, prm.p);
  Field conv = convolve_direct(*k, up);
  double s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += conv[i] * up[i];
  return s * u.grid.cell_volume();
}

}  // namespace

TEST_CASE("action: zero field and direct-sum oracle") {
  Params prm{3, 2.0, 2.0};
  Grid g(3, 16, 10.0);
  CHECK(action(Field(g), prm) == 0.0);

  double c[3] = {0.4, -0.7, 0.2};
  Field u = bump(g, c, 1.4, 1.3);
  double direct = 0.5 * h1_inner(u, u) - interaction_direct(u, prm) / (2 * prm.p);
  CHECK(rel_err(action(u, prm), direct) < 1e-12);
}

TEST_CASE("action scaling at p=2 matches the one-sided fibering energy") {
  Params prm{2, 1.2, 2.0};
  Grid g(2, 16, 9.0);
  Field u = abs_field(smooth_field(g, 11));
  Field zero(g);
  for (double t : {0.3, 1.0, 2.7}) {
    double via_action = action(scaled(u, std::sqrt(t)), prm);
    double via_fibering = fibering_energy(u, zero, t, 0.0, prm);
    CHECK(rel_err(via_action, via_fibering) < 1e-12);
  }
}

TEST_CASE("interaction_cross: diagonal, symmetry, two-cell hand value") {
  Params prm{2, 1.0, 2.4};
  Grid g(2, 16, 8.0);
  Field f = smooth_field(g, 21), h = smooth_field(g, 22);
  CHECK(rel_err(interaction_cross(f, f, prm), interaction(f, prm)) < 1e-12);
  CHECK(rel_err(interaction_cross(f, h, prm), interaction_cross(h, f, prm)) < 1e-10);

  // two unit cells at distance d in 3-D with alpha = 2: D = h^{2N} / (4 pi d)
  Params p3{3, 2.0, 2.0};
  Grid g3(3, 16, 8.0);
  Field a(g3), b(g3);
  const std::size_t ia = (3 * 16 + 4) * 16 + 5, ib = (9 * 16 + 4) * 16 + 5;
  a[ia] = 1.0;
  b[ib] = 1.0;
  const double d = 6 * g3.spacing();
  double hand = std::pow(g3.cell_volume(), 2) / (4 * std::numbers::pi * d);
  CHECK(rel_err(interaction_cross(a, b, p3), hand) < 1e-10);
}

TEST_CASE("gradient: zero field, finite differences, odd equivariance") {
  Params prm{1, 0.5, 2.5};
  Grid g(1, 128, 20.0);
  CHECK(linf_norm(gradient(Field(g), prm)) == 0.0);

  for (int s = 0; s < 5; ++s) {
    Field u = smooth_field(g, 300 + s);
    Field phi = smooth_field(g, 400 + s);
    const double eps = 1e-5;
    Field up = u, um = u;
    axpy(eps, phi, up);
    axpy(-eps, phi, um);
    double fd = (action(up, prm) - action(um, prm)) / (2 * eps);
    Field r = gradient(u, prm);
    double pair = 0;
    for (std::size_t i = 0; i < r.size(); ++i) pair += r[i] * phi[i];
    pair *= g.cell_volume();
    CHECK(rel_err(fd, pair) < 1e-6);
  }

  // odd input at p = 2: the Euler operator stays odd under x -> -x
  Params p2{1, 0.5, 2.0};
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = g.center(static_cast<int>(i));
    u[i] = x * std::exp(-x * x / 4.0);
  }
  Field r = gradient(u, p2);
  double odd_defect = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    odd_defect = std::max(odd_defect, std::fabs(r[i] + r[u.size() - 1 - i]));
  CHECK(odd_defect < 1e-10 * linf_norm(r));

  Params sub{1, 0.5, 1.8};
  CHECK_THROWS(gradient(u, sub));
}

TEST_CASE("sobolev_gradient: Riesz representation identity") {
  Params prm{2, 1.0, 2.2};
  Grid g(2, 16, 9.0);
  Field u = smooth_field(g, 31);
  Field gfield = sobolev_gradient(u, prm);
  Field r = gradient(u, prm);
  for (int s = 0; s < 5; ++s) {
    Field phi = smooth_field(g, 500 + s);
    double lhs = h1_inner(gfield, phi);
    double rhs = 0;
    for (std::size_t i = 0; i < r.size(); ++i) rhs += r[i] * phi[i];
    rhs *= g.cell_volume();
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("groundstate_quotient: scale invariance and projection identity") {
  Params prm{1, 0.6, 2.3};
  Grid g(1, 128, 18.0);
  Field u = positive_field(g, 41);
  double q = groundstate_quotient(u, prm);
  for (double lam : {2.0, -3.0, 0.1}) {
    CHECK(rel_err(groundstate_quotient(scaled(u, lam), prm), q) < 1e-10);
  }
  auto [t, tu] = scalar_project(u, prm);
  CHECK(rel_err(q, action(tu, prm)) < 1e-10);
  CHECK(t > 0);

  CHECK_THROWS(groundstate_quotient(Field(g), prm));
}

TEST_CASE("energy breakdown: identities and interaction decomposition") {
  Params prm{2, 1.3, 2.4};
  Grid g(2, 16, 9.0);
  Field u = smooth_field(g, 55);
  EnergyBreakdown eb = energy_breakdown(u, prm);

  CHECK(rel_err(eb.action, 0.5 * eb.h1_norm_sq - eb.interaction / (2 * prm.p)) < 1e-13);
  CHECK(rel_err(eb.nehari_residual, eb.h1_norm_sq - eb.interaction) < 1e-13);
  CHECK(rel_err(eb.nehari_residual, eb.nodal_residual_plus + eb.nodal_residual_minus) < 1e-12);

  auto [up, um] = split_signs(u);
  double d_pp = interaction(up, prm);
  double d_mm = interaction(um, prm);
  double d_pm = interaction_cross(up, um, prm);
  CHECK(rel_err(eb.interaction, d_pp + 2 * d_pm + d_mm) < 1e-10);

  // on the manifold the action is (1/2 - 1/2p) h1
  auto [t, tu] = scalar_project(u, prm);
  EnergyBreakdown on = energy_breakdown(tu, prm);
  CHECK(std::fabs(on.nehari_residual) < 1e-10 * on.h1_norm_sq);
  CHECK(rel_err(on.action, (0.5 - 0.5 / prm.p) * on.h1_norm_sq) < 1e-10);
}

TEST_CASE("action against the direct-sum oracle at desk scale (N=3, M=32)") {
  Params prm{3, 2.0, 2.0};
  Grid g(3, 32, 12.0);
  double c[3] = {0.3, -0.5, 0.8};
  Field u = bump(g, c, 1.6, 1.0);
  double direct = 0.5 * h1_inner(u, u) - interaction_direct(u, prm) / (2 * prm.p);
  CHECK(rel_err(action(u, prm), direct) < 1e-12);
}
