#include "choq/nehari.hpp"

#include <algorithm>
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

double FiberingScalars::energy(double tp, double tm) const {
  const double q = 1.0 / p;
  return 0.5 * std::pow(tp, 2 * q) * a_plus + 0.5 * std::pow(tm, 2 * q) * a_minus -
         std::pow(tp, q) * std::pow(tm, q) * h1_cross -
         (tp * tp * d_plus + 2 * tp * tm * d_cross + tm * tm * d_minus) / (2 * p);
}

std::array<double, 2> FiberingScalars::grad(double tp, double tm) const {
  const double q = 1.0 / p;
  double gp = q * std::pow(tp, 2 * q - 1) * a_plus -
              q * std::pow(tp, q - 1) * std::pow(tm, q) * h1_cross -
              (tp * d_plus + tm * d_cross) / p;
  double gm = q * std::pow(tm, 2 * q - 1) * a_minus -
              q * std::pow(tm, q - 1) * std::pow(tp, q) * h1_cross -
              (tm * d_minus + tp * d_cross) / p;
  return {gp, gm};
}

std::array<double, 3> FiberingScalars::hess(double tp, double tm) const {
  const double q = 1.0 / p;
  double hpp = q * (2 * q - 1) * std::pow(tp, 2 * q - 2) * a_plus -
               q * (q - 1) * std::pow(tp, q - 2) * std::pow(tm, q) * h1_cross - d_plus / p;
  double hmm = q * (2 * q - 1) * std::pow(tm, 2 * q - 2) * a_minus -
               q * (q - 1) * std::pow(tm, q - 2) * std::pow(tp, q) * h1_cross - d_minus / p;
  double hpm = -q * q * std::pow(tp, q - 1) * std::pow(tm, q - 1) * h1_cross - d_cross / p;
  return {hpp, hpm, hmm};
}

FiberingData fibering_data(const Field& w_plus, const Field& w_minus, const Params& prm) {
  require_same_grid(w_plus, w_minus, "fibering_data");
  for (std::size_t i = 0; i < w_plus.size(); ++i) {
    if (w_plus[i] < 0 || w_minus[i] < 0)
      throw std::invalid_argument("fibering_data: parts must be nonnegative");
    if (w_plus[i] != 0 && w_minus[i] != 0)
      throw std::invalid_argument("fibering_data: overlapping supports");
  }

  FiberingData d;
  d.s.p = prm.p;
  auto g = spectral::h1_gram(w_plus, w_minus);
  d.s.a_plus = g.uu;
  d.s.a_minus = g.vv;
  d.s.h1_cross = g.uv;

  auto k = kernel_for(w_plus.grid, prm.alpha);
  Field pp = pow_abs(w_plus, prm.p);
  Field pm = pow_abs(w_minus, prm.p);
  d.conv_plus = convolve(*k, pp);
  d.conv_minus = convolve(*k, pm);
  d.s.d_plus = dot_integral(d.conv_plus, pp);
  d.s.d_minus = dot_integral(d.conv_minus, pm);
  d.s.d_cross = dot_integral(d.conv_plus, pm);
  return d;
}

std::pair<double, Field> scalar_project(const Field& u, const Params& prm) {
  double h1 = h1_inner(u, u);
  if (h1 == 0.0) throw std::domain_error("scalar_project: u = 0");
  double d = interaction(u, prm);
  if (!(d > 0)) throw std::domain_error("scalar_project: interaction not positive (corrupt kernel or field)");
  double t = std::pow(h1 / d, 1.0 / (2.0 * prm.p - 2.0));
  return {t, scaled(u, t)};
}

double fibering_energy(const Field& w_plus, const Field& w_minus, double t_plus, double t_minus,
                       const Params& prm) {
  if (t_plus < 0 || t_minus < 0) throw std::invalid_argument("fibering_energy: t must be >= 0");
  return fibering_data(w_plus, w_minus, prm).s.energy(t_plus, t_minus);
}

FiberingPoint maximize(const FiberingScalars& s) {
  FiberingPoint out;
  const double p = s.p;
  if (!(s.a_plus > 0) || !(s.a_minus > 0) || !(s.d_plus > 0) || !(s.d_minus > 0)) return out;

  // Decoupled scalar projections as the initial iterate.
  double tp = std::pow(s.a_plus / s.d_plus, p / (2 * p - 2));
  double tm = std::pow(s.a_minus / s.d_minus, p / (2 * p - 2));
  const double floor_p = 1e-12 * tp, floor_m = 1e-12 * tm;

  auto rel_grad = [&](double a, double b) {
    auto g = s.grad(a, b);
    double scale_p = std::abs(std::pow(a, 2 / p - 1) * s.a_plus) / p + std::abs(a * s.d_plus + b * s.d_cross) / p;
    double scale_m = std::abs(std::pow(b, 2 / p - 1) * s.a_minus) / p + std::abs(b * s.d_minus + a * s.d_cross) / p;
    return std::max(std::abs(g[0]) / scale_p, std::abs(g[1]) / scale_m);
  };

  int it = 0;
  bool used_fallback = false;
  for (; it < 200; ++it) {
    if (rel_grad(tp, tm) < 1e-13) {
      out.converged = true;
      break;
    }
    auto g = s.grad(tp, tm);
    auto h = s.hess(tp, tm);
    double det = h[0] * h[2] - h[1] * h[1];
    double dp, dm;
    if (det > 0 && h[0] < 0) {
      // Newton step on the concave model.
      dp = -(h[2] * g[0] - h[1] * g[1]) / det;
      dm = -(h[0] * g[1] - h[1] * g[0]) / det;
    } else {
      dp = g[0] * tp * tp;  // scaled ascent
      dm = g[1] * tm * tm;
    }
    double e0 = s.energy(tp, tm);
    double lam = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, lam *= 0.5) {
      double ap = tp + lam * dp, am = tm + lam * dm;
      if (ap <= 0 || am <= 0) continue;
      if (s.energy(ap, am) >= e0) {
        tp = ap;
        tm = am;
        moved = true;
        break;
      }
    }
    if (!moved) {
      if (used_fallback) break;
      used_fallback = true;
      // Coarse log-grid restart around the decoupled projections.
      double tp0 = std::pow(s.a_plus / s.d_plus, p / (2 * p - 2));
      double tm0 = std::pow(s.a_minus / s.d_minus, p / (2 * p - 2));
      double best = -1e300, bp = tp, bm = tm;
      for (int i = 0; i < 41; ++i) {
        for (int j = 0; j < 41; ++j) {
          double a = tp0 * std::pow(10.0, -2.0 + 4.0 * i / 40.0);
          double b = tm0 * std::pow(10.0, -2.0 + 4.0 * j / 40.0);
          double e = s.energy(a, b);
          if (e > best) {
            best = e;
            bp = a;
            bm = b;
          }
        }
      }
      tp = bp;
      tm = bm;
    }
    if (tp < floor_p || tm < floor_m) {
      // Drifting into a boundary maximizer: interaction dominates.
      out.converged = false;
      break;
    }
  }

  out.t_plus = tp;
  out.t_minus = tm;
  out.value = s.energy(tp, tm);
  out.iterations = it;
  if (out.converged && (tp < floor_p || tm < floor_m)) out.converged = false;
  return out;
}

FiberingPoint fibering_maximize(const Field& w_plus, const Field& w_minus, const Params& prm) {
  if (prm.p < 2.0) throw std::domain_error("fibering_maximize: concavity needs p >= 2");
  double np = linf_norm(w_plus), nm = linf_norm(w_minus);
  if (np == 0 || nm == 0) throw std::invalid_argument("fibering_maximize: a part vanishes");
  return maximize(fibering_data(w_plus, w_minus, prm).s);
}

}  // namespace choq
