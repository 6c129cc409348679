#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace catinf {

/// A named finite wire type: an object of Mat(R+) together with value labels.
struct WireType {
  std::string name;
  std::vector<std::string> values;

  /// Builds a wire type, rejecting empty or duplicate value labels.
  static WireType make(std::string name, std::vector<std::string> values);

  /// Wire `name` with values "prefix0" ... "prefix{n-1}".
  static WireType indexed(std::string name, std::size_t cardinality,
                          std::string_view prefix = "");

  std::size_t cardinality() const noexcept { return values.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const WireType&) const = default;
};

/// An ordered list of wires. Indices are mixed radix with the first wire most
/// significant; the empty shape is the monoidal unit with cardinality 1.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<WireType> wires);
  Shape(std::initializer_list<WireType> wires);

  const std::vector<WireType>& wires() const noexcept { return wires_; }
  std::size_t rank() const noexcept { return wires_.size(); }
  bool empty() const noexcept { return wires_.empty(); }
  std::size_t cardinality() const noexcept { return cardinality_; }

  const WireType& wire(std::size_t i) const { return wires_.at(i); }
  std::vector<std::string> names() const;

  /// First wire carrying `name`.
  std::optional<std::size_t> find(std::string_view name) const;

  /// Mixed-radix helpers.
  std::size_t encode(const std::vector<std::size_t>& digits) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  std::vector<std::size_t> strides() const;

  /// Index of the joint value given one label per wire.
  std::size_t index_of_labels(const std::vector<std::string>& labels) const;
  std::string label_of(std::size_t index) const;

  /// Sub-shape made of wires at the listed positions, in that order.
  Shape select(const std::vector<std::size_t>& positions) const;

  Shape renamed(const std::map<std::string, std::string>& renames) const;

  friend Shape operator+(const Shape& a, const Shape& b);
  bool operator==(const Shape& other) const { return wires_ == other.wires_; }

 private:
  std::vector<WireType> wires_;
  std::size_t cardinality_ = 1;
};

std::string describe(const Shape& shape);

}  // namespace catinf
