#include "choq/riesz.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "choq/spectral.hpp"

namespace choq {

namespace {

constexpr double pi = std::numbers::pi;

std::size_t padded_size(const Grid& g) {
  std::size_t n = 1;
  for (int a = 0; a < g.dim; ++a) n *= static_cast<std::size_t>(2 * g.m);
  return n;
}

// Offset (in cells) represented by a padded-grid index along one axis.
inline int offset_of(int j, int p) { return j <= p / 2 ? j : j - p; }

}  // namespace

double riesz_constant(int dim, double alpha) {
  return std::tgamma((dim - alpha) / 2.0) /
         (std::tgamma(alpha / 2.0) * std::pow(pi, dim / 2.0) * std::pow(2.0, alpha));
}

double unit_sphere_area(int dim) { return 2.0 * std::pow(pi, dim / 2.0) / std::tgamma(dim / 2.0); }

double unit_ball_volume(int dim) { return std::pow(pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0); }

RieszKernel build_kernel(const Grid& grid, double alpha) {
  if (!(alpha > 0 && alpha < grid.dim)) throw std::invalid_argument("build_kernel: alpha must lie in (0, N)");

  RieszKernel k;
  k.grid = grid;
  k.alpha = alpha;

  const double h = grid.spacing();
  const double a_alpha = riesz_constant(grid.dim, alpha);
  // Mean of the kernel over the ball with |B_r| = h^N: exact radial integral
  // A_alpha sigma_{N-1} r^alpha / alpha.
  const double r_ball = h * std::pow(unit_ball_volume(grid.dim), -1.0 / grid.dim);
  k.origin_cell_value = a_alpha * unit_sphere_area(grid.dim) * std::pow(r_ball, alpha) /
                        (alpha * grid.cell_volume());

  const int p = 2 * grid.m;
  k.samples.assign(padded_size(grid), 0.0);
  const double expo = (alpha - grid.dim) / 2.0;  // kernel = A |x|^{alpha-N} = A (r^2)^expo
  std::size_t idx = 0;
  const int n0 = grid.dim >= 1 ? p : 1;
  const int n1 = grid.dim >= 2 ? p : 1;
  const int n2 = grid.dim >= 3 ? p : 1;
  for (int j0 = 0; j0 < n0; ++j0) {
    const double x0 = offset_of(j0, p) * h;
    for (int j1 = 0; j1 < n1; ++j1) {
      const double x1 = grid.dim >= 2 ? offset_of(j1, p) * h : 0.0;
      for (int j2 = 0; j2 < n2; ++j2, ++idx) {
        const double x2 = grid.dim >= 3 ? offset_of(j2, p) * h : 0.0;
        const double r2 = x0 * x0 + x1 * x1 + x2 * x2;
        k.samples[idx] = r2 == 0.0 ? k.origin_cell_value : a_alpha * std::pow(r2, expo);
      }
    }
  }

  int np[3] = {p, p, p};
  k.spectrum = spectral::forward_r2c(grid.dim, np, k.samples.data());
  return k;
}

std::shared_ptr<const RieszKernel> kernel_for(const Grid& grid, double alpha) {
  using KeyT = std::tuple<int, int, std::uint64_t, std::uint64_t>;
  static std::map<KeyT, std::shared_ptr<const RieszKernel>> cache;
  static std::mutex mutex;

  std::uint64_t lb, ab;
  std::memcpy(&lb, &grid.box, sizeof lb);
  std::memcpy(&ab, &alpha, sizeof ab);
  KeyT key{grid.dim, grid.m, lb, ab};

  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto k = std::make_shared<const RieszKernel>(build_kernel(grid, alpha));
  cache[key] = k;
  return k;
}

namespace {

// Offset of a last-axis row inside the padded box; `row` encodes the leading
// axis indices of the original grid in row-major order.
std::size_t padded_row_offset(const Grid& g, std::size_t row, int p) {
  switch (g.dim) {
    case 1:
      return 0;
    case 2:
      return row * static_cast<std::size_t>(p);
    default: {
      std::size_t i0 = row / g.m, i1 = row % g.m;
      return (i0 * p + i1) * static_cast<std::size_t>(p);
    }
  }
}

}  // namespace

Field convolve(const RieszKernel& kernel, const Field& v) {
  if (!(v.grid == kernel.grid)) throw std::invalid_argument("convolve: field grid does not match kernel grid");
  const Grid& g = v.grid;
  const int m = g.m, p = 2 * g.m;
  int np[3] = {p, p, p};

  std::vector<double> pad(padded_size(g), 0.0);
  const std::size_t rows = g.size() / m;
  for (std::size_t r = 0; r < rows; ++r)
    std::memcpy(&pad[padded_row_offset(g, r, p)], &v.v[r * m], m * sizeof(double));

  auto spec = spectral::forward_r2c(g.dim, np, pad.data());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= kernel.spectrum[i];
  spectral::backward_c2r(g.dim, np, spec, pad.data());

  Field out(g);
  const double scale = g.cell_volume() / static_cast<double>(padded_size(g));
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = &pad[padded_row_offset(g, r, p)];
    for (int j = 0; j < m; ++j) out.v[r * m + j] = src[j] * scale;
  }
  return out;
}

Field convolve_direct(const RieszKernel& kernel, const Field& v) {
  if (!(v.grid == kernel.grid)) throw std::invalid_argument("convolve_direct: field grid does not match kernel grid");
  const Grid& g = v.grid;
  if (g.size() > (1u << 16)) throw std::invalid_argument("convolve_direct: grid too large (M^N > 2^16)");

  const int p = 2 * g.m;
  Field out(g);
  int xi[3], yi[3];
  for (std::size_t x = 0; x < g.size(); ++x) {
    g.unravel(x, xi);
    long double acc = 0.0L;
    for (std::size_t y = 0; y < g.size(); ++y) {
      g.unravel(y, yi);
      std::size_t kidx = 0;
      for (int a = 0; a < g.dim; ++a) {
        int d = xi[a] - yi[a];
        if (d < 0) d += p;
        kidx = kidx * p + static_cast<std::size_t>(d);
      }
      acc += static_cast<long double>(kernel.samples[kidx]) * v[y];
    }
    out[x] = static_cast<double>(acc) * g.cell_volume();
  }
  return out;
}

}  // namespace choq
