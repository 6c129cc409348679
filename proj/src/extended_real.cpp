#include "catinf/extended_real.hpp"

#include <cmath>

#include "catinf/error.hpp"

namespace catinf {

ExtendedReal ExtendedReal::operator-(double finite) const {
  if (!std::isfinite(finite)) {
    fail(ErrorCode::InvalidArgument, "cannot subtract a non-finite amount");
  }
  return is_infinite() ? *this : ExtendedReal(v_ - finite);
}

bool same_extended(ExtendedReal a, ExtendedReal b, double tol) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
  return std::abs(a.value() - b.value()) <= tol;
}

ExtendedReal neg_log(double x, double zero_threshold) {
  if (x <= zero_threshold) return ExtendedReal::infinity();
  return ExtendedReal(-std::log(x));
}

}  // namespace catinf
