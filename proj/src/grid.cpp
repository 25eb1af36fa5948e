#include "choq/grid.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace choq {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim_, int m_, double box_) : dim(dim_), m(m_), box(box_) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2 or 3");
  if (m < 8) throw std::invalid_argument("Grid: need at least 8 points per axis");
  if (!power_of_two(m)) throw std::invalid_argument("Grid: points per axis must be a power of two");
  if (!(box > 0)) throw std::invalid_argument("Grid: box length must be positive");
}

double Grid::cell_volume() const {
  double h = spacing(), hv = h;
  for (int a = 1; a < dim; ++a) hv *= h;
  return hv;
}

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(m);
  return n;
}

void Grid::unravel(std::size_t idx, int out[3]) const {
  out[0] = out[1] = out[2] = 0;
  for (int a = dim - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % m);
    idx /= m;
  }
}

void Grid::coords(std::size_t idx, double out[3]) const {
  int ix[3];
  unravel(idx, ix);
  for (int a = 0; a < dim; ++a) out[a] = center(ix[a]);
}

Field::Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
  if (v.size() != g.size()) throw std::invalid_argument("Field: value count does not match grid");
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid == b.grid)) throw std::invalid_argument(std::string(what) + ": fields on different grids");
}

double integrate(const Field& f) {
  long double s = 0.0L;
  for (double x : f.v) s += x;
  return static_cast<double>(s) * f.grid.cell_volume();
}

std::pair<Field, Field> split_signs(const Field& u) {
  Field plus(u.grid), minus(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = u[i];
    plus[i] = x > 0 ? x : 0.0;
    minus[i] = x < 0 ? -x : 0.0;
  }
  return {std::move(plus), std::move(minus)};
}

Field abs_field(const Field& u) {
  Field r(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::fabs(u[i]);
  return r;
}

Field pow_abs(const Field& u, double p) {
  Field r(u.grid);
  if (p == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] * u[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) r[i] = std::pow(std::fabs(u[i]), p);
  }
  return r;
}

Field sign_pow(const Field& u, double q) {
  Field r(u.grid);
  if (q == 1.0) {
    r.v = u.v;
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) {
      double x = u[i];
      r[i] = x == 0.0 ? 0.0 : (x > 0 ? std::pow(x, q) : -std::pow(-x, q));
    }
  }
  return r;
}

Field scaled(const Field& u, double a) {
  Field r(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = a * u[i];
  return r;
}

void axpy(double a, const Field& x, Field& y) {
  require_same_grid(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double linf_norm(const Field& u) {
  double m = 0;
  for (double x : u.v) m = std::max(m, std::fabs(x));
  return m;
}

Field shifted(const Field& u, const int cells[3]) {
  const Grid& g = u.grid;
  Field r(g);
  int ix[3];
  for (std::size_t i = 0; i < u.size(); ++i) {
    g.unravel(i, ix);
    std::size_t j = 0;
    for (int a = 0; a < g.dim; ++a) {
      int s = ((ix[a] + cells[a]) % g.m + g.m) % g.m;
      j = j * g.m + static_cast<std::size_t>(s);
    }
    r[j] = u[i];
  }
  return r;
}

}  // namespace choq
