#include "choq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <future>
#include <stdexcept>

#include "choq/diagnostics.hpp"
#include "choq/spectral.hpp"

namespace choq {

namespace {

double dot_integral(const Field& a, const Field& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s) * a.grid.cell_volume();
}

Field default_bump(const Grid& g) {
  Field u(g);
  const double sigma = std::max(0.75, g.box / 12.0);
  double x[3];
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.coords(i, x);
    double r2 = 0;
    for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
    u[i] = std::exp(-r2 / (2 * sigma * sigma));
  }
  return u;
}

// One solver state: a field on the constraint set with its cached
// convolution K * |u|^p, H^1 norm and action.
struct State {
  Field u;
  Field conv;
  double h1 = 0;
  double act = 0;
};

// Rescales |w| onto the Nehari manifold.
State project_groundstate(Field w, const Params& prm) {
  for (double& x : w.v) x = std::fabs(x);
  double a = spectral::h1_norm_sq(w);
  if (a == 0.0) throw std::domain_error("groundstate projection: zero field");
  auto k = kernel_for(w.grid, prm.alpha);
  Field wp = pow_abs(w, prm.p);
  Field conv_w = convolve(*k, wp);
  double d = dot_integral(conv_w, wp);
  if (!(d > 0)) throw std::domain_error("groundstate projection: interaction not positive");
  double t = std::pow(a / d, 1.0 / (2.0 * prm.p - 2.0));
  double tp = std::pow(t, prm.p);

  State s;
  s.u = scaled(w, t);
  s.conv = scaled(conv_w, tp);
  s.h1 = t * t * a;
  s.act = 0.5 * t * t * a - tp * tp * d / (2.0 * prm.p);
  return s;
}

// Fibering projection onto the Nehari nodal set. Returns false with a status
// when a sign part degenerates or the maximizer is not interior.
bool project_nodal(Field w, const Params& prm, const SolveConfig& cfg, State& out,
                   std::string& status) {
  auto [wp, wm] = split_signs(w);
  if (linf_norm(wp) == 0 || linf_norm(wm) == 0) {
    status = "degenerate_sign_part";
    return false;
  }
  FiberingData data = fibering_data(wp, wm, prm);
  double h1w = data.s.a_plus + data.s.a_minus - 2 * data.s.h1_cross;
  double floor = cfg.degenerate_tol * cfg.degenerate_tol * h1w;
  if (data.s.a_plus < floor || data.s.a_minus < floor) {
    status = "degenerate_sign_part";
    return false;
  }
  FiberingPoint fp = maximize(data.s);
  if (!fp.converged) {
    status = "fibering_failed";
    return false;
  }
  const double q = 1.0 / prm.p;
  double sp = std::pow(fp.t_plus, q), sm = std::pow(fp.t_minus, q);
  out.u = scaled(wp, sp);
  axpy(-sm, wm, out.u);
  out.conv = scaled(data.conv_plus, fp.t_plus);
  axpy(fp.t_minus, data.conv_minus, out.conv);
  out.h1 = std::pow(fp.t_plus, 2 * q) * data.s.a_plus + std::pow(fp.t_minus, 2 * q) * data.s.a_minus -
           2 * sp * sm * data.s.h1_cross;
  out.act = fp.value;
  return true;
}

// Sobolev gradient g = u - (-Lap+1)^{-1} [(K*|u|^p) |u|^{p-2} u] from the
// cached convolution.
Field sobolev_gradient_with(const State& s, const Params& prm) {
  Field nl = sign_pow(s.u, prm.p - 1.0);
  for (std::size_t i = 0; i < nl.size(); ++i) nl[i] *= s.conv[i];
  Field g = spectral::helmholtz_inverse(nl);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = s.u[i] - g[i];
  return g;
}

using Projector = std::function<bool(Field, State&, std::string&)>;

// Shared projected-descent driver: backtracking line search on the action
// along the Sobolev gradient, re-projecting every trial point, then a Newton
// polish for the last digits.
SolveResult descend(State s, const Params& prm, const SolveConfig& cfg, const Projector& project,
                    double descent_tol) {
  SolveResult out;
  out.action_trace.push_back(s.act);
  const double h1_initial = s.h1;

  double residual = 1e300;
  int it = 0;
  std::string status = "max_iters";
  bool stop = false;

  for (; it < cfg.max_iters && !stop; ++it) {
    Field g = sobolev_gradient_with(s, prm);
    double gnorm2 = spectral::h1_norm_sq(g);
    residual = std::sqrt(gnorm2 / s.h1);
    if (residual <= descent_tol) {
      status = "converged";
      break;
    }
    if (s.h1 < cfg.degenerate_tol * cfg.degenerate_tol * h1_initial) {
      status = "collapse";
      break;
    }

    bool accepted = false;
    for (double tau = cfg.step_init; tau > 1e-14; tau *= cfg.backtrack_factor) {
      Field w = s.u;
      axpy(-tau, g, w);
      State trial;
      std::string perr;
      if (!project(std::move(w), trial, perr)) {
        // Degenerate trial: shrink the step rather than give up, unless the
        // current point is already degenerate.
        if (tau <= 1e-13) {
          status = perr;
          stop = true;
          break;
        }
        continue;
      }
      bool armijo = trial.act <= s.act - 1e-4 * tau * gnorm2;
      bool noise_floor = residual < 1e-5 && trial.act <= s.act + 1e-13 * std::fabs(s.act);
      if (std::getenv("CHOQ_TRACE"))
        std::fprintf(stderr, "it %d tau=%.3g act=%.12g trial=%.12g res=%.3e armijo=%d\n", it, tau,
                     s.act, trial.act, residual, int(armijo));
      if (armijo || noise_floor) {
        s = std::move(trial);
        out.action_trace.push_back(s.act);
        accepted = true;
        break;
      }
    }
    if (stop) break;
    if (!accepted) {
      status = "stalled";
      break;
    }
  }

  // Endgame: quadratic convergence to the critical point once descent has
  // reached its target or its noise floor.
  if (residual > cfg.grad_tol && (status == "converged" || status == "stalled")) {
    PolishOutcome po = newton_polish(s.u, prm, cfg.grad_tol);
    if (po.converged || po.residual < residual) {
      std::string perr;
      State polished;
      // The polished field is a critical point; it sits on the constraint set
      // by itself, but keep the cached quantities consistent.
      if (project(po.u, polished, perr)) {
        s = std::move(polished);
        out.action_trace.push_back(s.act);
      } else {
        s.u = po.u;
        auto k = kernel_for(s.u.grid, prm.alpha);
        s.conv = convolve(*k, pow_abs(s.u, prm.p));
        s.h1 = spectral::h1_norm_sq(s.u);
      }
      Field g = sobolev_gradient_with(s, prm);
      residual = std::sqrt(spectral::h1_norm_sq(g) / s.h1);
    }
    status = residual <= cfg.grad_tol ? "converged" : status;
  }

  out.u = s.u;
  out.report.energy = energy_breakdown_with(s.u, s.conv, prm);
  out.report.level = out.report.energy.action;
  out.report.residual = residual;
  out.report.pohozaev_residual = pohozaev_residual(s.u, prm);
  out.report.iterations = it;
  out.report.p = prm.p;
  out.report.alpha = prm.alpha;
  out.report.converged = residual <= cfg.grad_tol;
  out.report.status = out.report.converged ? "converged" : status;
  return out;
}

}  // namespace

double tail_mass_fraction(const Field& u) {
  const Grid& g = u.grid;
  const double r_cut = g.box / 4.0;
  long double inside = 0, outside = 0;
  double x[3];
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.coords(i, x);
    double r2 = 0;
    for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
    long double m = static_cast<long double>(u[i]) * u[i];
    (r2 > r_cut * r_cut ? outside : inside) += m;
  }
  long double total = inside + outside;
  return total > 0 ? static_cast<double>(outside / total) : 0.0;
}

SolveResult groundstate_solve(const Params& prm, const SolveConfig& cfg, const Grid& grid,
                              const Field* seed) {
  prm.validate();
  Field u0 = seed ? *seed : default_bump(grid);
  Projector project = [&prm](Field w, State& st, std::string& err) {
    try {
      st = project_groundstate(std::move(w), prm);
    } catch (const std::domain_error& e) {
      err = "collapse";
      return false;
    }
    return true;
  };
  State s0;
  std::string err;
  if (!project(u0, s0, err)) throw std::domain_error("groundstate_solve: unusable seed");
  // Descent handles the bulk; switch to Newton when the action differences
  // approach roundoff.
  return descend(std::move(s0), prm, cfg, project, std::max(cfg.grad_tol, 1e-6));
}

SolveResult nodal_solve(const Params& prm, const SolveConfig& cfg, const Grid& grid,
                        const Field* warm_start) {
  prm.validate();
  if (!(prm.p > 2.0)) throw std::invalid_argument("nodal_solve: existence regime requires p > 2");

  Field u0(grid);
  if (warm_start) {
    u0 = *warm_start;
  } else {
    SolveResult gs = groundstate_solve(prm, cfg, grid);
    double offset = cfg.seed_offset > 0 ? cfg.seed_offset : grid.box / 4.0;
    int cells = std::max(1, static_cast<int>(std::lround(offset / grid.spacing())));
    int plus[3] = {cells, 0, 0}, minus[3] = {-cells, 0, 0};
    u0 = shifted(gs.u, plus);
    Field neg = shifted(gs.u, minus);
    axpy(-1.0, neg, u0);
  }

  Projector project = [&prm, &cfg](Field w, State& st, std::string& err) {
    return project_nodal(std::move(w), prm, cfg, st, err);
  };
  State s0;
  std::string err;
  if (!project(u0, s0, err)) {
    SolveResult out;
    out.u = u0;
    out.report.p = prm.p;
    out.report.alpha = prm.alpha;
    out.report.converged = false;
    out.report.status = err;
    return out;
  }
  return descend(std::move(s0), prm, cfg, project, std::max(cfg.grad_tol, 1e-6));
}

std::vector<SolveResult> continuation_run(const Params& params_base, const SolveConfig& cfg,
                                          const Grid& grid, const std::vector<double>& p_schedule) {
  if (p_schedule.empty()) throw std::invalid_argument("continuation: empty schedule");
  for (std::size_t i = 0; i < p_schedule.size(); ++i) {
    if (!(p_schedule[i] > 2.0))
      throw std::invalid_argument("continuation: schedule entries must stay above 2");
    if (i > 0 && !(p_schedule[i] < p_schedule[i - 1]))
      throw std::invalid_argument("continuation: schedule must be strictly decreasing");
    Params prm = params_base;
    prm.p = p_schedule[i];
    prm.validate();
  }
  if (!(p_schedule.back() <= 2.02))
    throw std::invalid_argument("continuation: schedule must end at p <= 2.02");

  std::vector<SolveResult> out;
  const Field* warm = nullptr;
  for (double p : p_schedule) {
    Params prm = params_base;
    prm.p = p;
    out.push_back(nodal_solve(prm, cfg, grid, warm));
    if (!out.back().report.converged) return out;
    warm = &out.back().u;
  }

  // Quadratic endpoint: no nodal-set machinery at p = 2, just an
  // unconstrained polish of the last iterate.
  Params p2 = params_base;
  p2.p = 2.0;
  p2.validate();
  PolishOutcome po = newton_polish(out.back().u, p2, cfg.grad_tol);
  SolveResult fin;
  fin.u = po.u;
  fin.report.energy = energy_breakdown(po.u, p2);
  fin.report.level = fin.report.energy.action;
  fin.report.residual = po.residual;
  fin.report.pohozaev_residual = pohozaev_residual(po.u, p2);
  fin.report.iterations = po.iterations;
  fin.report.p = 2.0;
  fin.report.alpha = p2.alpha;
  fin.report.converged = po.converged;
  fin.report.status = po.converged ? "converged" : "p2_polish_failed";
  out.push_back(std::move(fin));
  return out;
}

std::vector<SolveResult> level_curve(const Params& params_base, const SolveConfig& cfg,
                                     const Grid& grid, std::vector<double> p_values) {
  for (double p : p_values) {
    Params prm = params_base;
    prm.p = p;
    prm.validate();
  }
  std::sort(p_values.begin(), p_values.end());
  std::vector<std::future<SolveResult>> futures;
  futures.reserve(p_values.size());
  for (double p : p_values) {
    futures.push_back(std::async(std::launch::async, [=, &cfg, &grid] {
      Params prm = params_base;
      prm.p = p;
      return groundstate_solve(prm, cfg, grid);
    }));
  }
  std::vector<SolveResult> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

PolishOutcome newton_polish(Field u, const Params& prm, double tol, int max_outer) {
  auto k = kernel_for(u.grid, prm.alpha);
  const double p = prm.p;

  struct Eval {
    Field conv, b1, g;
    double phi, res;
  };
  auto evaluate = [&](const Field& w) {
    Eval e;
    e.conv = convolve(*k, pow_abs(w, p));
    e.b1 = sign_pow(w, p - 1.0);
    Field nl(w.grid);
    for (std::size_t i = 0; i < w.size(); ++i) nl[i] = e.conv[i] * e.b1[i];
    e.g = spectral::helmholtz_inverse(nl);
    for (std::size_t i = 0; i < w.size(); ++i) e.g[i] = w[i] - e.g[i];
    double g2 = spectral::h1_norm_sq(e.g);
    e.phi = 0.5 * g2;
    e.res = std::sqrt(g2 / spectral::h1_norm_sq(w));
    return e;
  };

  Eval cur = evaluate(u);
  PolishOutcome out;
  int outer = 0;
  for (; outer < max_outer && cur.res > tol; ++outer) {
    Field b2 = pow_abs(u, p - 2.0);
    // Directional derivative of the preconditioned residual map.
    auto apply_j = [&](const Field& phi) {
      Field t(phi.grid);
      for (std::size_t i = 0; i < phi.size(); ++i) t[i] = cur.b1[i] * phi[i];
      Field cv = convolve(*k, t);
      for (std::size_t i = 0; i < phi.size(); ++i)
        t[i] = p * cv[i] * cur.b1[i] + (p - 1.0) * cur.conv[i] * b2[i] * phi[i];
      Field r = spectral::helmholtz_inverse(t);
      for (std::size_t i = 0; i < phi.size(); ++i) r[i] = phi[i] - r[i];
      return r;
    };

    // Gauss-Newton step via CG on the normal equations in the H^1 metric;
    // the tiny shift absorbs the translation zero modes.
    const double mu = 1e-12;
    Field rhs = apply_j(cur.g);
    for (double& x : rhs.v) x = -x;
    Field x(u.grid), r = rhs, d = rhs;
    double rho = spectral::h1_norm_sq(r);
    const double rho0 = rho;
    for (int cg = 0; cg < 60 && rho > 0.01 * rho0; ++cg) {
      Field ad = apply_j(apply_j(d));
      axpy(mu, d, ad);
      double alpha = rho / spectral::h1_gram(d, ad).uv;
      axpy(alpha, d, x);
      axpy(-alpha, ad, r);
      double rho_new = spectral::h1_norm_sq(r);
      double beta = rho_new / rho;
      rho = rho_new;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = r[i] + beta * d[i];
    }

    bool moved = false;
    for (double lam = 1.0; lam > 1e-10; lam *= 0.5) {
      Field trial = u;
      axpy(lam, x, trial);
      Eval e = evaluate(trial);
      if (e.phi < cur.phi) {
        u = std::move(trial);
        cur = std::move(e);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  out.u = std::move(u);
  out.residual = cur.res;
  out.iterations = outer;
  out.converged = cur.res <= tol;
  return out;
}

}  // namespace choq
