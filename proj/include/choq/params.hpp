#pragma once

namespace choq {

// Equation parameters: dimension N, Riesz order alpha in (0, N), and the
// nonlinearity exponent p, which must lie strictly inside the window
// (N + alpha)/N < p < (N + alpha)/(N - 2)+ for the variational problem to
// make sense.
struct Params {
  int dim = 3;
  double alpha = 2.0;
  double p = 2.0;

  double window_lo() const { return (dim + alpha) / dim; }
  double window_hi() const;  // +inf when N <= 2
  bool p_admissible() const;

  // Throws std::invalid_argument with a message naming the window.
  void validate() const;
};

}  // namespace choq
