#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "choq/riesz.hpp"

using namespace choq;
using namespace choq::testing;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("riesz constant: gamma formula at N=3, alpha=2") {
  CHECK(rel_err(riesz_constant(3, 2.0), 1.0 / (4 * pi)) < 1e-14);
}

TEST_CASE("kernel samples: Newtonian values and reflection symmetry") {
  Grid g(3, 8, 8.0);  // h = 1
  RieszKernel k = build_kernel(g, 2.0);
  const int p = 2 * g.m;
  auto at = [&](int i, int j, int l) {
    auto wrap = [&](int d) { return d >= 0 ? d : d + p; };
    return k.samples[(static_cast<std::size_t>(wrap(i)) * p + wrap(j)) * p + wrap(l)];
  };
  CHECK(rel_err(at(1, 0, 0), 1.0 / (4 * pi)) < 1e-13);
  CHECK(rel_err(at(2, 2, 1), 1.0 / (4 * pi * 3.0)) < 1e-13);

  for (int i = -3; i <= 3; ++i)
    for (int j = -3; j <= 3; ++j)
      for (int l = -3; l <= 3; ++l) CHECK(at(i, j, l) == at(-i, -j, -l));

  // singular cell carries the strictly largest sample
  double largest = 0;
  for (double s : k.samples) largest = std::max(largest, s);
  CHECK(k.origin_cell_value == largest);
  CHECK(k.origin_cell_value > at(1, 0, 0));
  for (double s : k.samples) CHECK(s > 0);
}

TEST_CASE("kernel origin cell: closed-form radial integral at N=1, alpha=1/2") {
  Grid g(1, 8, 8.0);  // h = 1
  RieszKernel k = build_kernel(g, 0.5);
  // ball of volume h^N = 1 in 1-D has radius 1/2; sphere "area" is 2 points
  double a = riesz_constant(1, 0.5);
  double oracle = a * 2.0 * std::pow(0.5, 0.5) / 0.5;
  CHECK(rel_err(k.origin_cell_value, oracle) < 1e-13);
}

TEST_CASE("convolution with a discrete delta reproduces the kernel") {
  Grid g(2, 16, 8.0);
  RieszKernel k = build_kernel(g, 1.0);
  Field v(g);
  const int cy = 5 * g.m + 9;  // arbitrary cell
  v[cy] = 1.0;
  Field fast = convolve(k, v);
  Field slow = convolve_direct(k, v);
  const double hn = g.cell_volume();
  const int p = 2 * g.m;
  int yi[3];
  g.unravel(cy, yi);
  int xi[3];
  for (std::size_t x = 0; x < g.size(); ++x) {
    g.unravel(x, xi);
    int d0 = xi[0] - yi[0], d1 = xi[1] - yi[1];
    if (d0 < 0) d0 += p;
    if (d1 < 0) d1 += p;
    double expect = hn * k.samples[static_cast<std::size_t>(d0) * p + d1];
    CHECK(rel_err(slow[x], expect) < 1e-14);
    CHECK(rel_err(fast[x], expect) < 1e-11);
  }
  CHECK(rel_err(slow[cy], hn * k.origin_cell_value) < 1e-14);
}

TEST_CASE("fft path equals the direct-sum oracle") {
  Grid g(1, 64, 12.0);
  RieszKernel k = build_kernel(g, 0.4);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 5; ++rep) {
    Field v(g);
    for (auto& x : v.v) x = nd(rng);
    Field fast = convolve(k, v);
    Field slow = convolve_direct(k, v);
    double scale = linf_norm(slow), err = 0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::fabs(fast[i] - slow[i]));
    CHECK(err / scale < 1e-12);
  }
}

TEST_CASE("convolution: zero field, positivity, self-adjointness") {
  Grid g(2, 16, 8.0);
  RieszKernel k = build_kernel(g, 1.2);
  Field zero(g);
  CHECK(linf_norm(convolve_direct(k, zero)) == 0.0);

  Field v = abs_field(smooth_field(g, 5));
  Field out = convolve_direct(k, v);
  for (double x : out.v) CHECK(x > 0);

  Field w = smooth_field(g, 6);
  Field kv = convolve(k, v), kw = convolve(k, w);
  double lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    lhs += kv[i] * w[i];
    rhs += kw[i] * v[i];
  }
  CHECK(rel_err(lhs, rhs) < 1e-10);

  // positive-definite quadratic form on random nonzero fields
  for (int s = 0; s < 10; ++s) {
    Field r = smooth_field(g, 900 + s);
    if (linf_norm(r) == 0) continue;
    Field kr = convolve(k, r);
    double q = 0;
    for (std::size_t i = 0; i < r.size(); ++i) q += kr[i] * r[i];
    CHECK(q > 0);
  }
}

TEST_CASE("Newtonian potential of a uniform ball (N=3, alpha=2)") {
  const double L = 8.0, R = L / 8.0;
  Grid g(3, 64, L);
  auto k = kernel_for(g, 2.0);
  Field ind(g);
  double x[3];
  for (std::size_t i = 0; i < ind.size(); ++i) {
    g.coords(i, x);
    ind[i] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= R * R ? 1.0 : 0.0;
  }
  Field phi = convolve(*k, ind);
  double max_rel = 0;
  for (std::size_t i = 0; i < ind.size(); ++i) {
    g.coords(i, x);
    double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if (r2 > R * R) continue;
    double want = (3 * R * R - r2) / 6.0;
    max_rel = std::max(max_rel, std::fabs(phi[i] - want) / want);
  }
  CHECK(max_rel < 0.02);
}

TEST_CASE("riesz errors: bad alpha, grid mismatch, oversized direct sum") {
  Grid g(3, 64, 8.0);
  CHECK_THROWS(build_kernel(g, 3.0));
  CHECK_THROWS(build_kernel(g, -1.0));
  Grid small(3, 16, 8.0);
  RieszKernel k = build_kernel(small, 2.0);
  CHECK_THROWS(convolve(k, Field(g)));
  RieszKernel kb = build_kernel(g, 2.0);
  CHECK_THROWS(convolve_direct(kb, Field(g)));  // 64^3 > 2^16
}
