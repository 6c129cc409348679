#pragma once

// Mat(R+) as a copy-discard category with caps and normalisation.
//
// A morphism f : X -> Y is a dense |X| x |Y| table of nonnegative reals, row
// index = domain value, column index = codomain value, both in mixed-radix
// order. Entry f(x, y) is read as the weight f(y | x). States have empty
// domain, effects empty codomain, scalars both.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "catinf/shape.hpp"
#include "catinf/tolerance.hpp"

namespace catinf {

class Morphism {
 public:
  /// Zero morphism dom -> cod.
  Morphism(Shape dom, Shape cod);
  /// Throws InvalidArgument on a size mismatch or a negative/non-finite entry.
  Morphism(Shape dom, Shape cod, std::vector<double> entries);

  static Morphism state(Shape cod, std::vector<double> entries);
  static Morphism effect(Shape dom, std::vector<double> entries);
  static Morphism scalar(double value);
  /// Point mass at the joint index `index` of `cod`.
  static Morphism point(Shape cod, std::size_t index);
  static Morphism point(Shape cod, const std::vector<std::string>& labels);

  const Shape& dom() const noexcept { return dom_; }
  const Shape& cod() const noexcept { return cod_; }
  std::size_t rows() const noexcept { return dom_.cardinality(); }
  std::size_t cols() const noexcept { return cod_.cardinality(); }

  double operator()(std::size_t row, std::size_t col) const {
    return entries_[row * cols() + col];
  }
  /// State value ω(x), effect value e(x), or scalar value.
  double at(std::size_t i) const { return entries_.at(i); }
  double value() const;

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols(), cols());
  }

  bool is_state() const noexcept { return dom_.empty(); }
  bool is_effect() const noexcept { return cod_.empty(); }

  /// Same entries with relabelled shapes of identical cardinalities.
  Morphism with_shapes(Shape dom, Shape cod) const;

 private:
  Shape dom_;
  Shape cod_;
  std::vector<double> entries_;
};

struct ChannelFlag {
  bool is_channel = false;
  double max_row_defect = 0.0;
};

// Category structure.
Morphism identity(const Shape& x);
Morphism compose(const Morphism& g, const Morphism& f);  // g ∘ f
Morphism tensor(const Morphism& f, const Morphism& g);
Morphism swap(const Shape& x, const Shape& y);
Morphism copy(const Shape& x, std::size_t n = 2);
Morphism discard(const Shape& x);
Morphism cap(const Shape& x);
Morphism scale(const Morphism& f, double factor);

// Derived operations.
Morphism state_to_effect(const Morphism& state);
Morphism sharp_effect(const Shape& x, std::size_t index);
Morphism marginal(const Morphism& f, const std::vector<std::string>& keep);
Morphism normalize(const Morphism& f);
ChannelFlag is_channel(const Morphism& f, const Tolerances& tol = {});
bool is_sharp(const Morphism& state, const Tolerances& tol = {});
double expectation(const Morphism& effect, const Morphism& state);

// Wire plumbing. These are composites of swaps and copies, computed by
// direct index remapping rather than dense multiplication.

/// Codomain wire k of the result is codomain wire order[k] of f.
Morphism permute_cod(const Morphism& f, const std::vector<std::size_t>& order);
Morphism permute_dom(const Morphism& f, const std::vector<std::size_t>& order);
/// Reorders codomain (resp. domain) wires to the given names, which must be a
/// permutation of f's uniquely named wires.
Morphism reorder_cod(const Morphism& f, const std::vector<std::string>& names);
Morphism reorder_dom(const Morphism& f, const std::vector<std::string>& names);
/// Positions of `names` within `shape`; UnknownWire if any is absent.
std::vector<std::size_t> positions_of(const Shape& shape,
                                      const std::vector<std::string>& names);

/// Largest entrywise |f - g|; ShapeMismatch unless shapes agree structurally.
double max_abs_diff(const Morphism& f, const Morphism& g);
bool approx_equal(const Morphism& f, const Morphism& g, double tol);

}  // namespace catinf
