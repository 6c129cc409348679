#include "catinf/category.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "catinf/error.hpp"

namespace catinf {

namespace {

void require_same(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b)) {
    fail(ErrorCode::ShapeMismatch,
         std::string(what) + ": " + describe(a) + " vs " + describe(b));
  }
}

}  // namespace

Morphism::Morphism(Shape dom, Shape cod)
    : dom_(std::move(dom)), cod_(std::move(cod)),
      entries_(dom_.cardinality() * cod_.cardinality(), 0.0) {}

Morphism::Morphism(Shape dom, Shape cod, std::vector<double> entries)
    : dom_(std::move(dom)), cod_(std::move(cod)), entries_(std::move(entries)) {
  if (entries_.size() != dom_.cardinality() * cod_.cardinality()) {
    fail(ErrorCode::InvalidArgument,
         "morphism " + describe(dom_) + " -> " + describe(cod_) + " needs " +
             std::to_string(dom_.cardinality() * cod_.cardinality()) +
             " entries, got " + std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorCode::InvalidArgument,
           "morphism entries must be finite and nonnegative");
    }
  }
}

Morphism Morphism::state(Shape cod, std::vector<double> entries) {
  return Morphism(Shape{}, std::move(cod), std::move(entries));
}

Morphism Morphism::effect(Shape dom, std::vector<double> entries) {
  return Morphism(std::move(dom), Shape{}, std::move(entries));
}

Morphism Morphism::scalar(double value) {
  return Morphism(Shape{}, Shape{}, {value});
}

Morphism Morphism::point(Shape cod, std::size_t index) {
  Morphism m(Shape{}, std::move(cod));
  m.entries_.at(index) = 1.0;
  return m;
}

Morphism Morphism::point(Shape cod, const std::vector<std::string>& labels) {
  const auto index = cod.index_of_labels(labels);
  return point(std::move(cod), index);
}

double Morphism::value() const {
  if (!dom_.empty() || !cod_.empty()) {
    fail(ErrorCode::ShapeMismatch, "value() requires a scalar");
  }
  return entries_[0];
}

Morphism Morphism::with_shapes(Shape dom, Shape cod) const {
  if (dom.cardinality() != dom_.cardinality() ||
      cod.cardinality() != cod_.cardinality()) {
    fail(ErrorCode::ShapeMismatch, "with_shapes changes cardinality");
  }
  Morphism m(std::move(dom), std::move(cod));
  m.entries_ = entries_;
  return m;
}

Morphism identity(const Shape& x) {
  std::vector<double> e(x.cardinality() * x.cardinality(), 0.0);
  for (std::size_t i = 0; i < x.cardinality(); ++i) e[i * x.cardinality() + i] = 1.0;
  return Morphism(x, x, std::move(e));
}

Morphism compose(const Morphism& g, const Morphism& f) {
  require_same(f.cod(), g.dom(), "compose");
  const auto nx = f.rows(), ny = f.cols(), nz = g.cols();
  std::vector<double> out(nx * nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double fxy = f(x, y);
      if (fxy == 0.0) continue;
      const auto grow = g.row(y);
      double* o = out.data() + x * nz;
      for (std::size_t z = 0; z < nz; ++z) o[z] += fxy * grow[z];
    }
  }
  return Morphism(f.dom(), g.cod(), std::move(out));
}

Morphism tensor(const Morphism& f, const Morphism& g) {
  const auto nx = f.rows(), nw = f.cols(), ny = g.rows(), nz = g.cols();
  std::vector<double> out(nx * ny * nw * nz, 0.0);
  const auto ncols = nw * nz;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      double* o = out.data() + (x * ny + y) * ncols;
      for (std::size_t w = 0; w < nw; ++w) {
        const double fxw = f(x, w);
        if (fxw == 0.0) continue;
        for (std::size_t z = 0; z < nz; ++z) o[w * nz + z] = fxw * g(y, z);
      }
    }
  }
  return Morphism(f.dom() + g.dom(), f.cod() + g.cod(), std::move(out));
}

Morphism swap(const Shape& x, const Shape& y) {
  const auto nx = x.cardinality(), ny = y.cardinality();
  std::vector<double> e(nx * ny * nx * ny, 0.0);
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      e[(a * ny + b) * (nx * ny) + (b * nx + a)] = 1.0;
    }
  }
  return Morphism(x + y, y + x, std::move(e));
}

Morphism copy(const Shape& x, std::size_t n) {
  if (n == 0) return discard(x);
  Shape cod;
  std::size_t diag_step = 0;  // index of (v, v, ..., v) is v * diag_step
  for (std::size_t k = 0; k < n; ++k) {
    cod = cod + x;
    diag_step = diag_step * x.cardinality() + 1;
  }
  std::vector<double> e(x.cardinality() * cod.cardinality(), 0.0);
  for (std::size_t v = 0; v < x.cardinality(); ++v) {
    e[v * cod.cardinality() + v * diag_step] = 1.0;
  }
  return Morphism(x, cod, std::move(e));
}

Morphism discard(const Shape& x) {
  return Morphism::effect(x, std::vector<double>(x.cardinality(), 1.0));
}

Morphism cap(const Shape& x) {
  const auto n = x.cardinality();
  std::vector<double> e(n * n, 0.0);
  for (std::size_t v = 0; v < n; ++v) e[v * n + v] = 1.0;
  return Morphism::effect(x + x, std::move(e));
}

Morphism scale(const Morphism& f, double factor) {
  std::vector<double> e(f.entries().begin(), f.entries().end());
  for (auto& v : e) v *= factor;
  return Morphism(f.dom(), f.cod(), std::move(e));
}

Morphism state_to_effect(const Morphism& state) {
  if (!state.is_state()) {
    fail(ErrorCode::ShapeMismatch, "state_to_effect needs a state, got domain " +
                                       describe(state.dom()));
  }
  return Morphism::effect(state.cod(), {state.entries().begin(), state.entries().end()});
}

Morphism sharp_effect(const Shape& x, std::size_t index) {
  std::vector<double> e(x.cardinality(), 0.0);
  e.at(index) = 1.0;
  return Morphism::effect(x, std::move(e));
}

std::vector<std::size_t> positions_of(const Shape& shape,
                                      const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& n : names) {
    auto p = shape.find(n);
    if (!p) fail(ErrorCode::UnknownWire, "no wire '" + n + "' in " + describe(shape));
    out.push_back(*p);
  }
  return out;
}

Morphism marginal(const Morphism& f, const std::vector<std::string>& keep) {
  for (const auto& k : keep) {
    if (!f.cod().find(k)) {
      fail(ErrorCode::UnknownWire, "marginal: no wire '" + k + "' in " + describe(f.cod()));
    }
  }
  const std::set<std::string> keep_set(keep.begin(), keep.end());
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < f.cod().rank(); ++i) {
    if (keep_set.count(f.cod().wire(i).name)) kept.push_back(i);
  }
  const Shape out_cod = f.cod().select(kept);
  const auto out_strides = out_cod.strides();
  std::vector<std::size_t> col_map(f.cols());
  for (std::size_t c = 0; c < f.cols(); ++c) {
    const auto digits = f.cod().decode(c);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < kept.size(); ++k) idx += digits[kept[k]] * out_strides[k];
    col_map[c] = idx;
  }
  std::vector<double> out(f.rows() * out_cod.cardinality(), 0.0);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      out[r * out_cod.cardinality() + col_map[c]] += f(r, c);
    }
  }
  return Morphism(f.dom(), out_cod, std::move(out));
}

Morphism normalize(const Morphism& f) {
  std::vector<double> e(f.entries().begin(), f.entries().end());
  for (std::size_t r = 0; r < f.rows(); ++r) {
    double* row = e.data() + r * f.cols();
    const double sum = std::accumulate(row, row + f.cols(), 0.0);
    if (sum == 0.0) continue;
    for (std::size_t c = 0; c < f.cols(); ++c) row[c] /= sum;
  }
  return Morphism(f.dom(), f.cod(), std::move(e));
}

ChannelFlag is_channel(const Morphism& f, const Tolerances& tol) {
  double defect = 0.0;
  for (std::size_t r = 0; r < f.rows(); ++r) {
    const auto row = f.row(r);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    defect = std::max(defect, std::abs(sum - 1.0));
  }
  return {defect <= tol.channel, defect};
}

bool is_sharp(const Morphism& state, const Tolerances& tol) {
  if (!state.is_state()) {
    fail(ErrorCode::ShapeMismatch, "is_sharp needs a state");
  }
  const auto n = state.cols();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double copied = x == y ? state.at(x) : 0.0;
      if (std::abs(copied - state.at(x) * state.at(y)) > tol.zero) return false;
    }
  }
  return true;
}

double expectation(const Morphism& effect, const Morphism& state) {
  if (!effect.is_effect() || !state.is_state()) {
    fail(ErrorCode::ShapeMismatch, "expectation needs an effect and a state");
  }
  require_same(effect.dom(), state.cod(), "expectation");
  double sum = 0.0;
  for (std::size_t x = 0; x < state.cols(); ++x) sum += effect.at(x) * state.at(x);
  return sum;
}

namespace {

// Index map for a wire permutation: result position k holds wire order[k].
std::vector<std::size_t> permutation_map(const Shape& shape,
                                         const std::vector<std::size_t>& order,
                                         Shape& permuted) {
  if (order.size() != shape.rank()) {
    fail(ErrorCode::InvalidArgument, "permutation length does not match rank");
  }
  std::vector<bool> seen(order.size(), false);
  for (auto o : order) {
    if (o >= order.size() || seen[o]) {
      fail(ErrorCode::InvalidArgument, "not a permutation of wire positions");
    }
    seen[o] = true;
  }
  permuted = shape.select(order);
  const auto new_strides = permuted.strides();
  std::vector<std::size_t> map(shape.cardinality());
  for (std::size_t old = 0; old < shape.cardinality(); ++old) {
    const auto digits = shape.decode(old);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < order.size(); ++k) idx += digits[order[k]] * new_strides[k];
    map[old] = idx;
  }
  return map;
}

std::vector<std::size_t> name_order(const Shape& shape,
                                    const std::vector<std::string>& names) {
  if (names.size() != shape.rank()) {
    fail(ErrorCode::ShapeMismatch, "reorder needs all " + std::to_string(shape.rank()) +
                                       " wires of " + describe(shape));
  }
  const auto order = positions_of(shape, names);
  std::set<std::size_t> distinct(order.begin(), order.end());
  if (distinct.size() != order.size()) {
    fail(ErrorCode::InvalidArgument, "reorder names must be distinct");
  }
  return order;
}

}  // namespace

Morphism permute_cod(const Morphism& f, const std::vector<std::size_t>& order) {
  Shape cod;
  const auto map = permutation_map(f.cod(), order, cod);
  std::vector<double> out(f.rows() * f.cols(), 0.0);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) out[r * f.cols() + map[c]] = f(r, c);
  }
  return Morphism(f.dom(), cod, std::move(out));
}

Morphism permute_dom(const Morphism& f, const std::vector<std::size_t>& order) {
  Shape dom;
  const auto map = permutation_map(f.dom(), order, dom);
  std::vector<double> out(f.rows() * f.cols(), 0.0);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) out[map[r] * f.cols() + c] = f(r, c);
  }
  return Morphism(dom, f.cod(), std::move(out));
}

Morphism reorder_cod(const Morphism& f, const std::vector<std::string>& names) {
  return permute_cod(f, name_order(f.cod(), names));
}

Morphism reorder_dom(const Morphism& f, const std::vector<std::string>& names) {
  return permute_dom(f, name_order(f.dom(), names));
}

double max_abs_diff(const Morphism& f, const Morphism& g) {
  require_same(f.dom(), g.dom(), "max_abs_diff domain");
  require_same(f.cod(), g.cod(), "max_abs_diff codomain");
  double d = 0.0;
  for (std::size_t i = 0; i < f.entries().size(); ++i) {
    d = std::max(d, std::abs(f.entries()[i] - g.entries()[i]));
  }
  return d;
}

bool approx_equal(const Morphism& f, const Morphism& g, double tol) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) return false;
  return max_abs_diff(f, g) <= tol;
}

}  // namespace catinf
