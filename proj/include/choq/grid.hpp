#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace choq {

// Uniform cell-centered discretization of the box [-L/2, L/2)^N with periodic
// topology. Cell centers sit at x_i = -L/2 + (i + 1/2) h, h = L/M, so no
// sample ever falls on the convolution kernel's singularity.
struct Grid {
  int dim = 0;     // N in {1, 2, 3}
  int m = 0;       // points per axis, power of two, >= 8
  double box = 0;  // L

  Grid() = default;
  Grid(int dim_, int m_, double box_);

  double spacing() const { return box / m; }
  double cell_volume() const;  // h^N
  std::size_t size() const;    // M^N
  double center(int i) const { return -0.5 * box + (i + 0.5) * spacing(); }

  void unravel(std::size_t idx, int out[3]) const;   // row-major decode
  void coords(std::size_t idx, double out[3]) const; // cell-center coordinates

  friend bool operator==(const Grid&, const Grid&) = default;
};

// A real grid function; values in row-major axis order.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> values);

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

void require_same_grid(const Field& a, const Field& b, const char* what);

// Rectangle rule h^N * sum over cells; spectrally accurate for smooth
// periodic integrands.
double integrate(const Field& f);

// \int grad u . grad v + u v computed spectrally (implemented in spectral.cpp).
double h1_inner(const Field& u, const Field& v);

// Pointwise decomposition u = u+ - u- with u+ = max(u,0), u- = max(-u,0).
std::pair<Field, Field> split_signs(const Field& u);

// Pointwise helpers shared across modules.
Field abs_field(const Field& u);
Field pow_abs(const Field& u, double p);   // |u|^p
Field sign_pow(const Field& u, double q);  // sign(u) |u|^q, 0 at u = 0
Field scaled(const Field& u, double a);
void axpy(double a, const Field& x, Field& y);  // y += a x
double linf_norm(const Field& u);
Field shifted(const Field& u, const int cells[3]);  // periodic integer-cell shift

}  // namespace choq
