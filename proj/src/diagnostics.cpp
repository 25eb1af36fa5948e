#include "choq/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "choq/functional.hpp"
#include "choq/nehari.hpp"
#include "choq/solver.hpp"
#include "choq/spectral.hpp"

namespace choq {

double pohozaev_residual(const Field& u, const Params& prm) {
  if (linf_norm(u) == 0) throw std::domain_error("pohozaev_residual: u = 0");
  const int n = prm.dim;
  double grad_sq = spectral::grad_inner(u, u);
  Field u2 = pow_abs(u, 2.0);
  double mass = integrate(u2);
  double d = interaction(u, prm);
  double lhs = 0.5 * (n - 2) * grad_sq + 0.5 * n * mass;
  double rhs = (n + prm.alpha) / (2.0 * prm.p) * d;
  return std::fabs(lhs - rhs) / std::max(std::fabs(lhs), std::fabs(rhs));
}

double hls_ratio(const Field& v, const Params& prm) {
  if (linf_norm(v) == 0) throw std::domain_error("hls_ratio: v = 0");
  double num = interaction(v, prm);
  double expo = 2.0 * prm.dim * prm.p / (prm.dim + prm.alpha);
  double den = integrate(pow_abs(v, expo));
  if (den == 0) throw std::domain_error("hls_ratio: zero denominator");
  return num / std::pow(den, (prm.dim + prm.alpha) / prm.dim);
}

DiagnosticsReport verify_level_inequalities(const SolveReport& groundstate,
                                            const SolveReport& nodal, const Field& nodal_field,
                                            double degenerate_tol) {
  if (groundstate.p != nodal.p || groundstate.alpha != nodal.alpha)
    throw std::invalid_argument("verify_level_inequalities: mismatched parameters");

  Params prm{nodal_field.grid.dim, nodal.alpha, nodal.p};
  DiagnosticsReport r;
  r.pohozaev_residual = pohozaev_residual(nodal_field, prm);
  r.hls_ratio = hls_ratio(nodal_field, prm);

  auto [up, um] = split_signs(nodal_field);
  auto g = spectral::h1_gram(up, um);
  double h1 = spectral::h1_norm_sq(nodal_field);
  r.nodal_norm_floor = std::sqrt(std::min(g.uu, g.vv) / h1);
  r.sign_change = std::sqrt(g.uu / h1) > degenerate_tol && std::sqrt(g.vv / h1) > degenerate_tol;

  r.level_gap = 2.0 * groundstate.level - nodal.level;
  r.ordering_ok = r.level_gap > 0 && nodal.level - groundstate.level > 0;
  return r;
}

std::pair<double, double> subcritical_level_check(const Field& profile, const Params& prm) {
  const Grid& g = profile.grid;
  const double p = prm.p;
  if (!(p < 2.0)) throw std::invalid_argument("subcritical_level_check: exploratory check is for p < 2");
  prm.validate();

  // Two hard-clipped copies at the maximal torus separation L/2 along the
  // first axis, so the supports are exactly disjoint.
  const double sep = g.box / 2.0;
  const double r_clip = 0.5 * sep - 2.0 * g.spacing();
  int off = g.m / 4;
  int plus[3] = {off, 0, 0}, minus[3] = {-off, 0, 0};
  Field wp = shifted(profile, plus);
  Field wm = shifted(profile, minus);
  double x[3];
  auto clip = [&](Field& f, double cx) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.grid.coords(i, x);
      double dx = x[0] - cx;
      dx -= g.box * std::round(dx / g.box);
      double r2 = dx * dx;
      for (int a = 1; a < g.dim; ++a) r2 += x[a] * x[a];
      if (r2 > r_clip * r_clip) f[i] = 0.0;
      else f[i] = std::fabs(f[i]);
    }
  };
  clip(wp, g.box / 4.0);
  clip(wm, -g.box / 4.0);

  double c0_est = groundstate_quotient(wp, prm);

  FiberingScalars s = fibering_data(wp, wm, prm).s;
  // Joint root of the stationarity system with a vanishing second component:
  // Newton in logarithmic coordinates (t- is astronomically small for p < 2).
  double lp = std::log(std::pow(s.a_plus / s.d_plus, p / (2 * p - 2)));
  double lm = (p / (2.0 - p)) * (std::log(std::exp(lp) * s.d_cross) - std::log(s.a_minus));

  auto f_pair = [&](double ap, double am, double& fp, double& fm) {
    // t * p * dE/dt for both components, written in terms of logs.
    double tp = std::exp(ap), tm = std::exp(am);
    double tpq = std::exp(ap / p), tmq = std::exp(am / p);  // t^{1/p}
    fp = tpq * tpq * s.a_plus - tpq * tmq * s.h1_cross - tp * tp * s.d_plus - tp * tm * s.d_cross;
    fm = tmq * tmq * s.a_minus - tpq * tmq * s.h1_cross - tm * tm * s.d_minus - tp * tm * s.d_cross;
  };
  for (int it = 0; it < 100; ++it) {
    double fp, fm;
    f_pair(lp, lm, fp, fm);
    double scale_p = std::exp(2 * lp / p) * s.a_plus, scale_m = std::exp(2 * lm / p) * s.a_minus;
    if (std::fabs(fp) < 1e-13 * scale_p && std::fabs(fm) < 1e-13 * scale_m) break;
    // Jacobian with respect to the log variables.
    double tp = std::exp(lp), tm = std::exp(lm);
    double tpq = std::exp(lp / p), tmq = std::exp(lm / p);
    double jpp = (2.0 / p) * tpq * tpq * s.a_plus - (1.0 / p) * tpq * tmq * s.h1_cross -
                 2 * tp * tp * s.d_plus - tp * tm * s.d_cross;
    double jpm = -(1.0 / p) * tpq * tmq * s.h1_cross - tp * tm * s.d_cross;
    double jmp = jpm;
    double jmm = (2.0 / p) * tmq * tmq * s.a_minus - (1.0 / p) * tpq * tmq * s.h1_cross -
                 2 * tm * tm * s.d_minus - tp * tm * s.d_cross;
    double det = jpp * jmm - jpm * jmp;
    if (det == 0) break;
    double dp = -(jmm * fp - jpm * fm) / det;
    double dm = -(jpp * fm - jmp * fp) / det;
    double lim = std::max(std::fabs(dp), std::fabs(dm));
    if (lim > 2.0) {
      dp *= 2.0 / lim;
      dm *= 2.0 / lim;
    }
    lp += dp;
    lm += dm;
  }

  double cnod_bound = s.energy(std::exp(lp), std::exp(lm));
  return {c0_est, cnod_bound};
}

}  // namespace choq
