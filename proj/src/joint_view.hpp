#pragma once

// Internal: a morphism I -> (S ⊗ O) viewed as a dense [i][s][o] table.

#include <string>
#include <vector>

#include "catinf/category.hpp"
#include "catinf/error.hpp"

namespace catinf::detail {

struct JointView {
  Shape input;
  Shape hidden;
  Shape observed;
  std::size_t ni = 1, ns = 1, no = 1;
  std::vector<double> v;

  double at(std::size_t i, std::size_t s, std::size_t o) const { return v[(i * ns + s) * no + o]; }

  double column_mass(std::size_t i, std::size_t o) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < ns; ++s) sum += at(i, s, o);
    return sum;
  }

  /// Splits `joint`'s codomain into (everything else, `observed_names`).
  static JointView of(const Morphism& joint, const std::vector<std::string>& observed_names) {
    std::vector<std::string> hidden_names;
    const auto cod_names = joint.cod().names();
    for (const auto& n : observed_names) {
      if (!joint.cod().find(n)) fail(ErrorCode::UnknownWire, "no wire '" + n + "' in " + describe(joint.cod()));
    }
    for (const auto& n : cod_names) {
      bool obs = false;
      for (const auto& o : observed_names) obs = obs || o == n;
      if (!obs) hidden_names.push_back(n);
    }
    auto order = hidden_names;
    order.insert(order.end(), observed_names.begin(), observed_names.end());
    const Morphism arranged = reorder_cod(joint, order);
    JointView view;
    view.input = joint.dom();
    std::vector<std::size_t> hpos, opos;
    for (std::size_t k = 0; k < hidden_names.size(); ++k) hpos.push_back(k);
    for (std::size_t k = 0; k < observed_names.size(); ++k) opos.push_back(hidden_names.size() + k);
    view.hidden = arranged.cod().select(hpos);
    view.observed = arranged.cod().select(opos);
    view.ni = view.input.cardinality();
    view.ns = view.hidden.cardinality();
    view.no = view.observed.cardinality();
    view.v.assign(arranged.entries().begin(), arranged.entries().end());
    return view;
  }

  /// Checks that `target` matches the observed part structurally.
  void require_observed(const Shape& target) const {
    if (!(target == observed)) {
      fail(ErrorCode::ShapeMismatch, "observation over " + describe(target) +
                                         " does not match model wires " + describe(observed));
    }
  }

  /// Result morphism I -> S from per-row values.
  Morphism hidden_morphism(std::vector<double> rows) const {
    return Morphism(input, hidden, std::move(rows));
  }
};

}  // namespace catinf::detail
