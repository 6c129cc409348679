#include "catinf/shape.hpp"

#include <set>
#include <sstream>

#include "catinf/error.hpp"

namespace catinf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnknownWire: return "UnknownWire";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDAG: return "InvalidDAG";
    case ErrorCode::InvalidDiagram: return "InvalidDiagram";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorCode::EmptyResult: return "EmptyResult";
    case ErrorCode::AllMinusInfinity: return "AllMinusInfinity";
  }
  return "Unknown";
}

WireType WireType::make(std::string name, std::vector<std::string> values) {
  if (values.empty()) {
    fail(ErrorCode::InvalidArgument, "wire '" + name + "' has no values");
  }
  std::set<std::string> seen;
  for (const auto& v : values) {
    if (!seen.insert(v).second) {
      fail(ErrorCode::InvalidArgument,
           "wire '" + name + "' repeats value label '" + v + "'");
    }
  }
  return WireType{std::move(name), std::move(values)};
}

WireType WireType::indexed(std::string name, std::size_t cardinality,
                           std::string_view prefix) {
  std::vector<std::string> values;
  values.reserve(cardinality);
  for (std::size_t i = 0; i < cardinality; ++i) {
    values.push_back(std::string(prefix) + std::to_string(i));
  }
  return make(std::move(name), std::move(values));
}

std::optional<std::size_t> WireType::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) return i;
  }
  return std::nullopt;
}

Shape::Shape(std::vector<WireType> wires) : wires_(std::move(wires)) {
  for (const auto& w : wires_) {
    if (w.values.empty()) {
      fail(ErrorCode::InvalidArgument, "wire '" + w.name + "' has no values");
    }
    cardinality_ *= w.cardinality();
  }
}

Shape::Shape(std::initializer_list<WireType> wires)
    : Shape(std::vector<WireType>(wires)) {}

std::vector<std::string> Shape::names() const {
  std::vector<std::string> out;
  out.reserve(wires_.size());
  for (const auto& w : wires_) out.push_back(w.name);
  return out;
}

std::optional<std::size_t> Shape::find(std::string_view name) const {
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    if (wires_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Shape::strides() const {
  std::vector<std::size_t> s(wires_.size(), 1);
  for (std::size_t i = wires_.size(); i-- > 1;) {
    s[i - 1] = s[i] * wires_[i].cardinality();
  }
  return s;
}

std::size_t Shape::encode(const std::vector<std::size_t>& digits) const {
  if (digits.size() != wires_.size()) {
    fail(ErrorCode::ShapeMismatch, "digit count does not match shape rank");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    index = index * wires_[i].cardinality() + digits[i];
  }
  return index;
}

std::vector<std::size_t> Shape::decode(std::size_t index) const {
  std::vector<std::size_t> digits(wires_.size());
  for (std::size_t i = wires_.size(); i-- > 0;) {
    const auto n = wires_[i].cardinality();
    digits[i] = index % n;
    index /= n;
  }
  return digits;
}

std::size_t Shape::index_of_labels(const std::vector<std::string>& labels) const {
  if (labels.size() != wires_.size()) {
    fail(ErrorCode::ShapeMismatch, "expected " + std::to_string(wires_.size()) +
                                       " value labels for " + describe(*this));
  }
  std::vector<std::size_t> digits;
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    auto d = wires_[i].index_of(labels[i]);
    if (!d) {
      fail(ErrorCode::InvalidArgument, "wire '" + wires_[i].name +
                                           "' has no value '" + labels[i] + "'");
    }
    digits.push_back(*d);
  }
  return encode(digits);
}

std::string Shape::label_of(std::size_t index) const {
  const auto digits = decode(index);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ',';
    out += wires_[i].values[digits[i]];
  }
  return out;
}

Shape Shape::select(const std::vector<std::size_t>& positions) const {
  std::vector<WireType> w;
  w.reserve(positions.size());
  for (auto p : positions) w.push_back(wires_.at(p));
  return Shape(std::move(w));
}

Shape Shape::renamed(const std::map<std::string, std::string>& renames) const {
  auto w = wires_;
  for (auto& wire : w) {
    if (auto it = renames.find(wire.name); it != renames.end()) wire.name = it->second;
  }
  return Shape(std::move(w));
}

Shape operator+(const Shape& a, const Shape& b) {
  auto w = a.wires_;
  w.insert(w.end(), b.wires_.begin(), b.wires_.end());
  return Shape(std::move(w));
}

std::string describe(const Shape& shape) {
  if (shape.empty()) return "I";
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.rank(); ++i) {
    if (i) os << "⊗";
    os << shape.wire(i).name << '[' << shape.wire(i).cardinality() << ']';
  }
  return os.str();
}

}  // namespace catinf
