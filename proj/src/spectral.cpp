#include "choq/spectral.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace choq::spectral {

namespace {

// FFTW plan creation is not thread safe; execution on per-thread buffers is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

enum class Kind { r2c, c2r, c2c_fwd, c2c_bwd };

struct PlanEntry {
  fftw_plan plan = nullptr;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  std::size_t nreal = 0, ncplx = 0;

  ~PlanEntry() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (real) fftw_free(real);
    if (cplx) fftw_free(cplx);
  }
};

using Key = std::array<int, 5>;  // dim, n0, n1, n2, kind

std::size_t real_count(int dim, const int n[3]) {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n[a]);
  return c;
}

std::size_t cplx_count(int dim, const int n[3]) {
  std::size_t c = 1;
  for (int a = 0; a + 1 < dim; ++a) c *= static_cast<std::size_t>(n[a]);
  return c * static_cast<std::size_t>(n[dim - 1] / 2 + 1);
}

PlanEntry& plan_for(int dim, const int n[3], Kind kind) {
  thread_local std::map<Key, PlanEntry> cache;
  Key key{dim, n[0], dim > 1 ? n[1] : 1, dim > 2 ? n[2] : 1, static_cast<int>(kind)};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  PlanEntry& e = cache[key];
  std::lock_guard<std::mutex> lock(plan_mutex());
  switch (kind) {
    case Kind::r2c:
    case Kind::c2r:
      e.nreal = real_count(dim, n);
      e.ncplx = cplx_count(dim, n);
      e.real = fftw_alloc_real(e.nreal);
      e.cplx = fftw_alloc_complex(e.ncplx);
      e.plan = kind == Kind::r2c
                   ? fftw_plan_dft_r2c(dim, n, e.real, e.cplx, FFTW_ESTIMATE)
                   : fftw_plan_dft_c2r(dim, n, e.cplx, e.real, FFTW_ESTIMATE);
      break;
    case Kind::c2c_fwd:
    case Kind::c2c_bwd:
      e.ncplx = real_count(dim, n);
      e.cplx = fftw_alloc_complex(2 * e.ncplx);  // in followed by out
      e.plan = fftw_plan_dft(dim, n, e.cplx, e.cplx + e.ncplx,
                             kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
      break;
  }
  if (!e.plan) throw std::runtime_error("fftw plan creation failed");
  return e;
}

// Integer frequency of index j on an axis of size na.
inline int freq(int j, int na) { return j <= na / 2 ? j : j - na; }

}  // namespace

std::vector<std::complex<double>> forward_r2c(int dim, const int n[3], const double* data) {
  PlanEntry& e = plan_for(dim, n, Kind::r2c);
  std::memcpy(e.real, data, e.nreal * sizeof(double));
  fftw_execute(e.plan);
  const auto* src = reinterpret_cast<const std::complex<double>*>(e.cplx);
  return {src, src + e.ncplx};
}

void backward_c2r(int dim, const int n[3], std::vector<std::complex<double>>& spec, double* out) {
  PlanEntry& e = plan_for(dim, n, Kind::c2r);
  if (spec.size() != e.ncplx) throw std::invalid_argument("backward_c2r: spectrum size mismatch");
  std::memcpy(e.cplx, spec.data(), e.ncplx * sizeof(fftw_complex));
  fftw_execute(e.plan);
  std::memcpy(out, e.real, e.nreal * sizeof(double));
}

namespace {

struct HalfSpectrumIter {
  // Walks the r2c half spectrum, exposing |k|^2 and the Hermitian weight of
  // each stored coefficient (interior last-axis entries count twice).
  int dim;
  int n[3];
  double two_pi_over_l;

  template <typename F>
  void for_each(F&& fn) const {
    int c_last = n[dim - 1] / 2 + 1;
    int n0 = dim > 0 ? n[0] : 1;
    int n1 = dim > 1 ? n[1] : 1;
    std::size_t idx = 0;
    for (int j0 = 0; j0 < (dim >= 2 ? n0 : 1); ++j0) {
      for (int j1 = 0; j1 < (dim >= 3 ? n1 : 1); ++j1) {
        for (int jl = 0; jl < c_last; ++jl, ++idx) {
          double k2 = 0;
          if (dim == 2) {
            double k = two_pi_over_l * freq(j0, n[0]);
            k2 += k * k;
          } else if (dim == 3) {
            double ka = two_pi_over_l * freq(j0, n[0]);
            double kb = two_pi_over_l * freq(j1, n[1]);
            k2 += ka * ka + kb * kb;
          }
          double kl = two_pi_over_l * jl;  // last axis holds 0..n/2 only
          k2 += kl * kl;
          double w = (jl == 0 || jl == n[dim - 1] / 2) ? 1.0 : 2.0;
          fn(idx, k2, w);
        }
      }
    }
  }
};

HalfSpectrumIter iter_for(const Grid& g) {
  HalfSpectrumIter it;
  it.dim = g.dim;
  it.n[0] = it.n[1] = it.n[2] = g.m;
  it.two_pi_over_l = 2.0 * std::numbers::pi / g.box;
  return it;
}

}  // namespace

Field apply_multiplier(const Field& u, const std::function<double(double)>& sym) {
  const Grid& g = u.grid;
  int n[3] = {g.m, g.m, g.m};
  auto spec = forward_r2c(g.dim, n, u.v.data());
  iter_for(g).for_each([&](std::size_t idx, double k2, double) { spec[idx] *= sym(k2); });
  Field out(g);
  backward_c2r(g.dim, n, spec, out.v.data());
  double inv = 1.0 / static_cast<double>(g.size());
  for (double& x : out.v) x *= inv;
  return out;
}

Field helmholtz(const Field& u) {
  return apply_multiplier(u, [](double k2) { return 1.0 + k2; });
}

Field helmholtz_inverse(const Field& u) {
  return apply_multiplier(u, [](double k2) { return 1.0 / (1.0 + k2); });
}

QuadraticForms h1_gram(const Field& u, const Field& v) {
  require_same_grid(u, v, "h1_gram");
  const Grid& g = u.grid;
  int n[3] = {g.m, g.m, g.m};
  auto su = forward_r2c(g.dim, n, u.v.data());
  auto sv = forward_r2c(g.dim, n, v.v.data());
  long double uu = 0, uv = 0, vv = 0;
  iter_for(g).for_each([&](std::size_t idx, double k2, double w) {
    double m = w * (1.0 + k2);
    uu += m * std::norm(su[idx]);
    vv += m * std::norm(sv[idx]);
    uv += m * (su[idx].real() * sv[idx].real() + su[idx].imag() * sv[idx].imag());
  });
  double scale = g.cell_volume() / static_cast<double>(g.size());
  return {static_cast<double>(uu) * scale, static_cast<double>(uv) * scale,
          static_cast<double>(vv) * scale};
}

double h1_norm_sq(const Field& u) {
  const Grid& g = u.grid;
  int n[3] = {g.m, g.m, g.m};
  auto su = forward_r2c(g.dim, n, u.v.data());
  long double acc = 0;
  iter_for(g).for_each([&](std::size_t idx, double k2, double w) {
    acc += w * (1.0 + k2) * std::norm(su[idx]);
  });
  return static_cast<double>(acc) * g.cell_volume() / static_cast<double>(g.size());
}

double grad_inner(const Field& u, const Field& v) {
  require_same_grid(u, v, "grad_inner");
  const Grid& g = u.grid;
  int n[3] = {g.m, g.m, g.m};
  auto su = forward_r2c(g.dim, n, u.v.data());
  auto sv = forward_r2c(g.dim, n, v.v.data());
  long double acc = 0;
  iter_for(g).for_each([&](std::size_t idx, double k2, double w) {
    acc += w * k2 * (su[idx].real() * sv[idx].real() + su[idx].imag() * sv[idx].imag());
  });
  return static_cast<double>(acc) * g.cell_volume() / static_cast<double>(g.size());
}

Field upsample2(const Field& u) {
  const Grid& g = u.grid;
  Grid fine(g.dim, 2 * g.m, g.box);
  int nc[3] = {g.m, g.m, g.m};
  int nf[3] = {fine.m, fine.m, fine.m};

  // Full coarse spectrum via c2c.
  PlanEntry& pf = plan_for(g.dim, nc, Kind::c2c_fwd);
  for (std::size_t i = 0; i < g.size(); ++i) {
    pf.cplx[i][0] = u[i];
    pf.cplx[i][1] = 0.0;
  }
  fftw_execute(pf.plan);
  const auto* cc = reinterpret_cast<const std::complex<double>*>(pf.cplx + pf.ncplx);
  std::vector<std::complex<double>> coarse(cc, cc + g.size());

  // Scatter into the fine spectrum. Cell centers of the fine grid shift by
  // h_coarse/4 relative to the coarse ones, which is the phase factor below;
  // the coarse Nyquist coefficient splits evenly between +-M/2.
  PlanEntry& pb = plan_for(g.dim, nf, Kind::c2c_bwd);
  std::memset(pb.cplx, 0, pb.ncplx * sizeof(fftw_complex));
  const double inv_mn = 1.0 / static_cast<double>(g.size());
  const double pi = std::numbers::pi;
  int jc[3] = {0, 0, 0};
  std::size_t nco = g.size();
  for (std::size_t ci = 0; ci < nco; ++ci) {
    std::size_t rem = ci;
    for (int a = g.dim - 1; a >= 0; --a) {
      jc[a] = static_cast<int>(rem % g.m);
      rem /= g.m;
    }
    // Per axis: list of (fine frequency, amplitude factor).
    struct Part {
      int f;
      double amp;
    };
    Part parts[3][2];
    int nparts[3];
    for (int a = 0; a < g.dim; ++a) {
      int f = freq(jc[a], g.m);
      if (jc[a] == g.m / 2) {
        parts[a][0] = {g.m / 2, 0.5};
        parts[a][1] = {-g.m / 2, 0.5};
        nparts[a] = 2;
      } else {
        parts[a][0] = {f, 1.0};
        nparts[a] = 1;
      }
    }
    int sel[3] = {0, 0, 0};
    while (true) {
      double amp = inv_mn;
      double phase = 0;
      std::size_t fi = 0;
      for (int a = 0; a < g.dim; ++a) {
        const Part& pt = parts[a][sel[a]];
        amp *= pt.amp;
        phase += -pi * pt.f / (2.0 * g.m);
        int idx = pt.f >= 0 ? pt.f : pt.f + fine.m;
        fi = fi * fine.m + static_cast<std::size_t>(idx);
      }
      std::complex<double> val = coarse[ci] * std::polar(amp, phase);
      pb.cplx[fi][0] += val.real();
      pb.cplx[fi][1] += val.imag();
      int a = 0;
      for (; a < g.dim; ++a) {
        if (++sel[a] < nparts[a]) break;
        sel[a] = 0;
      }
      if (a == g.dim) break;
    }
  }
  fftw_execute(pb.plan);
  Field out(fine);
  for (std::size_t i = 0; i < fine.size(); ++i) out[i] = pb.cplx[pb.ncplx + i][0];
  return out;
}

}  // namespace choq::spectral

namespace choq {

double h1_inner(const Field& u, const Field& v) { return spectral::h1_gram(u, v).uv; }

}  // namespace choq
