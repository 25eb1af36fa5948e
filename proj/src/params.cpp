#include "choq/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace choq {

double Params::window_hi() const {
  if (dim <= 2) return std::numeric_limits<double>::infinity();
  return (dim + alpha) / (dim - 2);
}

bool Params::p_admissible() const { return p > window_lo() && p < window_hi(); }

void Params::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("params: dim must be 1, 2 or 3");
  if (!(alpha > 0 && alpha < dim)) {
    std::ostringstream os;
    os << "params: alpha = " << alpha << " outside (0, N) = (0, " << dim << ")";
    throw std::invalid_argument(os.str());
  }
  if (!p_admissible()) {
    std::ostringstream os;
    os << "params: p = " << p << " outside the admissible window (N+alpha)/N < p < (N+alpha)/(N-2)+ = ("
       << window_lo() << ", ";
    if (dim <= 2)
      os << "inf";
    else
      os << window_hi();
    os << ") for N = " << dim << ", alpha = " << alpha << " (endpoints excluded)";
    throw std::invalid_argument(os.str());
  }
  // The quadratic endpoint additionally needs alpha > (N-4)+; automatic for
  // N <= 3 but kept explicit.
  if (p == 2.0 && !(alpha > std::max(dim - 4, 0))) {
    throw std::invalid_argument("params: p = 2 requires alpha > (N-4)+");
  }
}

}  // namespace choq
