#pragma once

// Law checks for the copy-discard structure, caps and normalisation, run on
// one freshly generated random model at a time. Each entry records the
// largest entrywise defect seen for that law.

#include <map>
#include <string>

#include "catinf/category.hpp"
#include "checks.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

namespace testsupport {

using LawDefects = std::map<std::string, double>;

inline void record(LawDefects& d, const std::string& law, double defect) {
  auto& slot = d[law];
  slot = std::max(slot, defect);
}

/// Random X, Y, Z with at most six wires in total, cardinalities 2..4.
inline LawDefects check_category_laws(Rng& rng) {
  using namespace catinf;
  LawDefects d;
  const std::size_t rx = rng.between(1, 2), ry = rng.between(1, 2), rz = rng.between(1, 6 - rx - ry);
  const Shape x = random_shape(rng, "X", rx);
  const Shape y = random_shape(rng, "Y", ry);
  const Shape z = random_shape(rng, "Z", std::min<std::size_t>(rz, 2));
  const Shape unit;

  const Morphism f = random_channel(rng, x, y);
  const Morphism h = random_channel(rng, y, z);
  const Morphism raw = random_morphism(rng, x, y);  // arbitrary rows, some zero
  const Morphism raw2 = random_morphism(rng, z, x);
  const Morphism omega = random_morphism(rng, unit, x);
  const Morphism det = random_deterministic(rng, x, y);

  const auto id = [](const Shape& s) { return identity(s); };

  // comonoid laws
  record(d, "copy coassociative",
         max_abs_diff(compose(tensor(copy(x), id(x)), copy(x)), compose(tensor(id(x), copy(x)), copy(x))));
  record(d, "copy cocommutative", max_abs_diff(compose(swap(x, x), copy(x)), copy(x)));
  record(d, "counit left", max_abs_diff(compose(tensor(discard(x), id(x)), copy(x)), id(x)));
  record(d, "counit right", max_abs_diff(compose(tensor(id(x), discard(x)), copy(x)), id(x)));
  record(d, "copy three legs", max_abs_diff(copy(x, 3), compose(tensor(copy(x), id(x)), copy(x))));

  // naturality of copy and discard in the objects
  // The two tensor-of-objects laws build (|X||Y|)^2-sized dense swaps, so
  // they use the leading wire of X and Y.
  const Shape x1 = x.select({0}), y1 = y.select({0});
  const Morphism middle = tensor(tensor(id(x1), swap(x1, y1)), id(y1));
  record(d, "copy of tensor", max_abs_diff(copy(x1 + y1), compose(middle, tensor(copy(x1), copy(y1)))));
  record(d, "discard of tensor", max_abs_diff(discard(x + y), tensor(discard(x), discard(y))));
  record(d, "discard of unit", std::abs(discard(unit).value() - 1.0));

  // channels, deterministic channels
  record(d, "channel preserves discard", max_abs_diff(compose(discard(y), f), discard(x)));
  record(d, "copy natural for deterministic",
         max_abs_diff(compose(copy(y), det), compose(tensor(det, det), copy(x))));

  // caps
  record(d, "cap symmetric", max_abs_diff(compose(cap(x), swap(x, x)), cap(x)));
  record(d, "cap after copy", max_abs_diff(compose(cap(x), copy(x)), discard(x)));
  record(d, "cap multiplication",
         max_abs_diff(compose(tensor(cap(x), id(x)), tensor(id(x), copy(x))),
                      compose(tensor(id(x), cap(x)), tensor(copy(x), id(x)))));
  record(d, "cap of tensor",
         max_abs_diff(cap(x1 + y1), compose(tensor(cap(x1), cap(y1)),
                                            tensor(tensor(id(x1), swap(y1, x1)), id(y1)))));
  {
    // cancellativity: f is recovered from the effect cap ∘ (f ⊗ id)
    const Morphism e = compose(cap(y), tensor(raw, id(y)));
    const Morphism rebuilt(x, y, entries(e));
    record(d, "cap cancellative", max_abs_diff(rebuilt, raw));
  }

  // normalisation
  {
    const Morphism rescaled = scale(normalize(omega), compose(discard(x), omega).value());
    record(d, "state is mass times normalisation", max_abs_diff(rescaled, omega));
    const Morphism sup = compose(tensor(normalize(raw), compose(discard(y), raw)), copy(x));
    record(d, "normalisation support condition", max_abs_diff(sup, raw));
    const Morphism raw_z = random_morphism(rng, z, y);
    record(d, "normalisation monoidal",
           max_abs_diff(normalize(tensor(raw, raw_z)), tensor(normalize(raw), normalize(raw_z))));
    record(d, "normalisation commutes with copy",
           max_abs_diff(normalize(compose(copy(y), raw)), compose(copy(y), normalize(raw))));
    record(d, "normalisation absorbs channels",
           max_abs_diff(normalize(compose(h, raw)), compose(h, normalize(raw))));
    const Morphism branch = compose(tensor(id(y), h), copy(y));
    record(d, "normalisation absorbs copied channels",
           max_abs_diff(normalize(compose(branch, raw)), compose(branch, normalize(raw))));
    record(d, "normalisation of a channel", max_abs_diff(normalize(f), f));
    const std::size_t xi = rng.between(0, x.cardinality() - 1);
    const Morphism point = Morphism::point(x, xi);
    record(d, "normalisation on points",
           max_abs_diff(compose(normalize(raw), point), normalize(compose(raw, point))));
  }

  // monoidal structure
  {
    const Morphism f2 = random_channel(rng, z, x);
    const Morphism g2 = random_channel(rng, x, z);
    record(d, "interchange",
           max_abs_diff(compose(tensor(f, g2), tensor(f2, raw2)),
                        tensor(compose(f, f2), compose(g2, raw2))));
    record(d, "swap involution", max_abs_diff(compose(swap(y, x), swap(x, y)), id(x + y)));
    record(d, "swap naturality", max_abs_diff(compose(swap(y, x), tensor(f, f2)),
                                              compose(tensor(f2, f), swap(x, z))));
  }

  // entries and reference arithmetic
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.cardinality(); ++i)
      for (std::size_t j = 0; j < y.cardinality(); ++j) {
        const double v = compose(sharp_effect(y, j), compose(raw, Morphism::point(x, i))).value();
        worst = std::max(worst, std::abs(v - raw(i, j)));
      }
    record(d, "entries via points and effects", worst);
    record(d, "composition matches reference",
           max_diff(compose(h, raw), oracle::matmul(entries(raw), x.cardinality(), y.cardinality(),
                                                    entries(h), z.cardinality())));
    record(d, "tensor matches reference",
           max_diff(tensor(raw, h), oracle::kron(entries(raw), x.cardinality(), y.cardinality(),
                                                 entries(h), y.cardinality(), z.cardinality())));
  }
  return d;
}

}  // namespace testsupport
