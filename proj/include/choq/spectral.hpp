#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "choq/grid.hpp"

namespace choq::spectral {

// Real-to-complex transforms on an arbitrary row-major box (used both for the
// solution grid and for the zero-padded convolution grid). Plans are cached
// per thread; plan creation itself is serialized internally.
std::vector<std::complex<double>> forward_r2c(int dim, const int n[3], const double* data);
// Unnormalized inverse; the caller divides by the point count. `spec` is
// clobbered (FFTW c2r destroys its input).
void backward_c2r(int dim, const int n[3], std::vector<std::complex<double>>& spec, double* out);

// Applies the real Fourier multiplier sym(|k|^2), k the angular frequency
// 2 pi n / L per axis.
Field apply_multiplier(const Field& u, const std::function<double(double)>& sym);

Field helmholtz(const Field& u);          // (-Lap + 1) u
Field helmholtz_inverse(const Field& u);  // (-Lap + 1)^{-1} u

struct QuadraticForms {
  double uu, uv, vv;
};
// The three H^1 pairings <u,u>, <u,v>, <v,v> in one spectral pass.
QuadraticForms h1_gram(const Field& u, const Field& v);

double h1_norm_sq(const Field& u);  // <u,u>_{H^1} with a single transform

double grad_inner(const Field& u, const Field& v);  // \int grad u . grad v

// Trigonometric interpolation onto the grid with twice the resolution
// (cell centers shift by h/4; the interpolant is evaluated at the new ones).
Field upsample2(const Field& u);

}  // namespace choq::spectral
