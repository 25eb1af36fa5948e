#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "choq/grid.hpp"

namespace choq {

// Riesz potential kernel A_alpha / |x|^(N - alpha) sampled on the doubled
// (zero-padding) grid, with the singular cell replaced by the kernel's exact
// mean over the ball of equal volume.
struct RieszKernel {
  Grid grid;
  double alpha = 0;
  double origin_cell_value = 0;
  std::vector<double> samples;                 // (2M)^N values, circular layout
  std::vector<std::complex<double>> spectrum;  // r2c transform of samples
};

double riesz_constant(int dim, double alpha);  // A_alpha
double unit_sphere_area(int dim);              // |S^{N-1}|
double unit_ball_volume(int dim);              // |B_1|

RieszKernel build_kernel(const Grid& grid, double alpha);

// Memoized kernels, one per (grid, alpha); safe for concurrent use.
std::shared_ptr<const RieszKernel> kernel_for(const Grid& grid, double alpha);

// h^N sum_y K(x-y) v(y): linear (free-space) convolution by zero padding to
// the doubled grid and multiplying transforms.
Field convolve(const RieszKernel& kernel, const Field& v);

// Same sum by an explicit double loop; restricted to M^N <= 2^16.
Field convolve_direct(const RieszKernel& kernel, const Field& v);

}  // namespace choq
