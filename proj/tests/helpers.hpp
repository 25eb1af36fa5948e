#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "choq/grid.hpp"

namespace choq::testing {

inline double rel_err(double got, double want) {
  double scale = std::max(std::fabs(got), std::fabs(want));
  return scale == 0 ? 0 : std::fabs(got - want) / scale;
}

// Periodic Gaussian bump via the minimum-image distance; values below
// clip_eps * |amp| are zeroed so bumps can have exactly disjoint supports.
inline Field bump(const Grid& g, const double center[3], double sigma, double amp,
                  double clip_eps = 0.0) {
  Field u(g);
  double x[3];
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.coords(i, x);
    double r2 = 0;
    for (int a = 0; a < g.dim; ++a) {
      double d = x[a] - center[a];
      d -= g.box * std::round(d / g.box);
      r2 += d * d;
    }
    double v = amp * std::exp(-r2 / (2 * sigma * sigma));
    u[i] = std::fabs(v) > clip_eps * std::fabs(amp) ? v : 0.0;
  }
  return u;
}

// Smooth random field: a handful of random periodic Gaussians.
inline Field smooth_field(const Grid& g, std::uint64_t seed, int nbumps = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.5 * g.box, 0.5 * g.box);
  std::uniform_real_distribution<double> width(g.box / 16.0, g.box / 6.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Field u(g);
  for (int b = 0; b < nbumps; ++b) {
    double c[3] = {0, 0, 0};
    for (int a = 0; a < g.dim; ++a) c[a] = pos(rng);
    Field piece = bump(g, c, width(rng), amp(rng));
    axpy(1.0, piece, u);
  }
  return u;
}

// A strictly positive smooth random field (for scalar projection tests).
inline Field positive_field(const Grid& g, std::uint64_t seed) {
  Field u = smooth_field(g, seed);
  for (auto& x : u.v) x = std::fabs(x) + 0.05;
  return u;
}

// Two nonnegative bumps with exactly disjoint supports at maximal torus
// separation along the first axis. Widths keep the clipped support radius
// (sqrt(2 ln 1/eps) sigma ~ 7.4 sigma) inside each half of the box.
inline std::pair<Field, Field> disjoint_pair(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(g.box / 44.0, g.box / 32.0);
  std::uniform_real_distribution<double> amp(0.4, 1.6);
  double cp[3] = {0.25 * g.box, 0, 0}, cm[3] = {-0.25 * g.box, 0, 0};
  Field wp = bump(g, cp, width(rng), amp(rng), 1e-12);
  Field wm = bump(g, cm, width(rng), amp(rng), 1e-12);
  return {std::move(wp), std::move(wm)};
}

// Exhaustive log-grid maximizer of a fibering energy with local refinement;
// the optimization oracle for the damped-Newton fibering solver.
template <typename Scalars>
std::pair<double, double> fibering_grid_search(const Scalars& s, int n = 400) {
  double tp0 = std::pow(s.a_plus / s.d_plus, s.p / (2 * s.p - 2));
  double tm0 = std::pow(s.a_minus / s.d_minus, s.p / (2 * s.p - 2));
  double lo_p = tp0 * 1e-2, hi_p = tp0 * 1e2, lo_m = tm0 * 1e-2, hi_m = tm0 * 1e2;
  double bp = tp0, bm = tm0;
  for (int round = 0; round < 8; ++round) {
    double best = -1e300;
    for (int i = 0; i < n; ++i) {
      double tp = lo_p * std::pow(hi_p / lo_p, double(i) / (n - 1));
      for (int j = 0; j < n; ++j) {
        double tm = lo_m * std::pow(hi_m / lo_m, double(j) / (n - 1));
        double e = s.energy(tp, tm);
        if (e > best) {
          best = e;
          bp = tp;
          bm = tm;
        }
      }
    }
    double shrink_p = std::pow(hi_p / lo_p, 2.0 / (n - 1));
    double shrink_m = std::pow(hi_m / lo_m, 2.0 / (n - 1));
    lo_p = bp / shrink_p;
    hi_p = bp * shrink_p;
    lo_m = bm / shrink_m;
    hi_m = bm * shrink_m;
  }
  return {bp, bm};
}

// Adaptive Simpson quadrature, the independent 1-D integration oracle.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 30) {
  auto rule = [&](double lo, double hi) {
    double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4 * f(mid) + f(hi));
  };
  std::function<double(double, double, double, int)> rec = [&](double lo, double hi, double whole,
                                                               int d) {
    double mid = 0.5 * (lo + hi);
    double left = rule(lo, mid), right = rule(mid, hi);
    if (d <= 0 || std::fabs(left + right - whole) < 15 * tol) return left + right;
    return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
  };
  return rec(a, b, rule(a, b), depth);
}

}  // namespace choq::testing
