#pragma once

#include <limits>

namespace catinf {

/// A value in (-inf, +inf]. Arises from -log of nonnegative reals, so -inf never
/// occurs; 0 * (+inf) is taken to be 0 wherever it appears as an expectation
/// weight.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : v_(v) {}  // NOLINT: implicit from double

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  constexpr bool is_infinite() const noexcept {
    return v_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const noexcept { return !is_infinite(); }
  constexpr double value() const noexcept { return v_; }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    return (a.is_infinite() || b.is_infinite()) ? infinity() : ExtendedReal(a.v_ + b.v_);
  }
  /// Subtracting a finite amount; an infinite subtrahend is a caller error.
  ExtendedReal operator-(double finite) const;
  ExtendedReal& operator+=(ExtendedReal other) { return *this = *this + other; }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }

 private:
  double v_ = 0.0;
};

/// Both infinite, or both finite and within `tol`.
bool same_extended(ExtendedReal a, ExtendedReal b, double tol);

/// -log x, with +inf for x <= zero_threshold.
ExtendedReal neg_log(double x, double zero_threshold);

}  // namespace catinf
