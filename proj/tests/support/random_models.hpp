#pragma once

// Seeded generators for property tests. Weights are either exactly zero or at
// least 0.01 before normalisation, which keeps every positive entry far above
// the zero threshold.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "catinf/category.hpp"
#include "catinf/diagram.hpp"
#include "oracles.hpp"

namespace testsupport {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(g_);
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(g_); }
  bool chance(double p) { return unit() < p; }

  double weight(double p_zero = 0.2) { return chance(p_zero) ? 0.0 : 0.01 + unit(); }

  /// Normalised weights; never all zero.
  std::vector<double> distribution(std::size_t n, double p_zero = 0.2) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) total += x = weight(p_zero);
    if (total == 0.0) {
      w[between(0, n - 1)] = 1.0;
      total = 1.0;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  std::vector<double> stochastic(std::size_t rows, std::size_t cols, double p_zero = 0.2) {
    std::vector<double> out;
    out.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto d = distribution(cols, p_zero);
      out.insert(out.end(), d.begin(), d.end());
    }
    return out;
  }

  /// Nonnegative entries without a row-sum constraint; some rows all zero.
  std::vector<double> arbitrary(std::size_t rows, std::size_t cols) {
    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      if (chance(0.15)) continue;
      const double scale = 0.1 + 3.0 * unit();
      for (std::size_t c = 0; c < cols; ++c) out[r * cols + c] = scale * weight();
    }
    return out;
  }

  /// Random sharp function table as a channel.
  std::vector<double> deterministic(std::size_t rows, std::size_t cols) {
    std::vector<double> out(rows * cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) out[r * cols + between(0, cols - 1)] = 1.0;
    return out;
  }

  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

inline catinf::WireType wire(const std::string& name, std::size_t n) {
  return catinf::WireType::indexed(name, n, "v");
}

/// Shape of `rank` fresh wires with cardinalities in [lo, hi].
inline catinf::Shape random_shape(Rng& rng, const std::string& prefix, std::size_t rank,
                                  std::size_t lo = 2, std::size_t hi = 4) {
  std::vector<catinf::WireType> ws;
  for (std::size_t k = 0; k < rank; ++k) ws.push_back(wire(prefix + std::to_string(k), rng.between(lo, hi)));
  return catinf::Shape(ws);
}

inline catinf::Morphism random_channel(Rng& rng, const catinf::Shape& dom, const catinf::Shape& cod,
                                       double p_zero = 0.2) {
  return catinf::Morphism(dom, cod, rng.stochastic(dom.cardinality(), cod.cardinality(), p_zero));
}

inline catinf::Morphism random_state(Rng& rng, const catinf::Shape& cod, double p_zero = 0.2) {
  return random_channel(rng, catinf::Shape{}, cod, p_zero);
}

inline catinf::Morphism random_morphism(Rng& rng, const catinf::Shape& dom, const catinf::Shape& cod) {
  return catinf::Morphism(dom, cod, rng.arbitrary(dom.cardinality(), cod.cardinality()));
}

inline catinf::Morphism random_deterministic(Rng& rng, const catinf::Shape& dom,
                                             const catinf::Shape& cod) {
  return catinf::Morphism(dom, cod, rng.deterministic(dom.cardinality(), cod.cardinality()));
}

/// Random open DAG on up to `max_vertices` vertices named V0, V1, ...; edges
/// only go from lower to higher index, inputs are parentless vertices.
inline catinf::OpenDAG random_dag(Rng& rng, std::size_t max_vertices = 8) {
  catinf::OpenDAG g;
  const std::size_t n = rng.between(1, max_vertices);
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::shuffle(order.begin(), order.end(), rng.engine());  // declaration order differs from topology
  for (std::size_t k : order) g.vertices.push_back("V" + std::to_string(k));
  std::vector<bool> has_parent(n, false);
  for (std::size_t child = 1; child < n; ++child) {
    for (std::size_t parent = 0; parent < child; ++parent) {
      if (rng.chance(0.3)) {
        g.edges.emplace_back("V" + std::to_string(parent), "V" + std::to_string(child));
        has_parent[child] = true;
      }
    }
  }
  std::shuffle(g.edges.begin(), g.edges.end(), rng.engine());
  for (std::size_t k = 0; k < n; ++k) {
    if (!has_parent[k] && rng.chance(0.4)) g.inputs.push_back("V" + std::to_string(k));
    if (rng.chance(0.4)) g.outputs.push_back("V" + std::to_string(k));
  }
  return g;
}

/// Random valid model on a random DAG, with random cardinalities and channels.
inline catinf::OpenModel random_model(Rng& rng, const catinf::OpenDAG& g, std::size_t lo = 2,
                                      std::size_t hi = 3) {
  const catinf::NetworkDiagram d = catinf::dag_to_diagram(g);
  catinf::Interpretation in;
  for (const auto& w : d.wires) in.wire_types.emplace(w, wire(w, rng.between(lo, hi)));
  for (const auto& b : d.boxes) {
    std::vector<catinf::WireType> dom;
    for (const auto& i : b.inputs) dom.push_back(in.wire_types.at(i));
    in.channels.emplace(b.name, random_channel(rng, catinf::Shape(dom),
                                               catinf::Shape{in.wire_types.at(b.output)}));
  }
  return catinf::OpenModel::make(d, in);
}

struct ActinfSizes {
  std::size_t p, s, o, sp, f;
};

/// Raw tables for the oracle together with the library model built from them.
struct ActinfPair {
  oracle::Actinf tables;
  catinf::ActinfModel model;
};

inline ActinfPair random_actinf(Rng& rng, const ActinfSizes& n, bool policy_in_future = true,
                                double p_zero = 0.2) {
  using catinf::Morphism;
  using catinf::Shape;
  const auto P = wire("P", n.p), S = wire("S", n.s), O = wire("O", n.o), Sp = wire("S'", n.sp),
             F = wire("F", n.f);
  oracle::Actinf t{n.p, n.s, n.o, n.sp, n.f, rng.distribution(n.p, p_zero),
                   rng.stochastic(n.p, n.s, p_zero), rng.stochastic(n.s, n.o, p_zero), {},
                   rng.stochastic(n.sp, n.f, p_zero)};
  Morphism bp(Shape{S, P}, Shape{Sp});
  if (policy_in_future) {
    t.bp = rng.stochastic(n.s * n.p, n.sp, p_zero);
    bp = Morphism(Shape{S, P}, Shape{Sp}, t.bp);
  } else {
    const auto rows = rng.stochastic(n.s, n.sp, p_zero);
    for (std::size_t s = 0; s < n.s; ++s)
      for (std::size_t p = 0; p < n.p; ++p)
        t.bp.insert(t.bp.end(), rows.begin() + static_cast<std::ptrdiff_t>(s * n.sp),
                    rows.begin() + static_cast<std::ptrdiff_t>((s + 1) * n.sp));
    bp = Morphism(Shape{S}, Shape{Sp}, rows);
  }
  auto model = catinf::build_actinf_model(Morphism::state(Shape{P}, t.e), Morphism(Shape{P}, Shape{S}, t.b),
                                          Morphism(Shape{S}, Shape{O}, t.a), bp,
                                          Morphism(Shape{Sp}, Shape{F}, t.ap));
  return {std::move(t), std::move(model)};
}

}  // namespace testsupport
