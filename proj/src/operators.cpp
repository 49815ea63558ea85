#include "msdd/operators.hpp"

#include <string>

namespace msdd::detail {

void check_lp_exponent(double p) {
  if (!(p >= 2.0 && p <= 6.0)) throw RangeError("Lp norm exponent must lie in [2, 6], got " + std::to_string(p));
}

}  // namespace msdd::detail
