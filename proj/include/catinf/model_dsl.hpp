#pragma once

// The .gmod.json model format.
//
//   {
//     "wires":   [{"name": "S", "values": ["s0", "s1"]}, ...],
//     "boxes":   [{"name": "c", "inputs": ["S"], "output": "O", "cpt": [[...], ...]}, ...],
//     "inputs":  [...],
//     "outputs": [...],
//     "metadata": {"title": "...", "notes": "..."}      (optional)
//   }
//
// CPT rows are indexed mixed-radix over the box inputs (first input most
// significant); each row is a distribution over the output wire's values.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catinf/diagram.hpp"
#include "catinf/updating.hpp"

namespace catinf {

/// Stable machine-readable problem codes.
namespace dsl_code {
inline constexpr std::string_view Syntax = "E001";
inline constexpr std::string_view Schema = "E002";
inline constexpr std::string_view Unreadable = "E003";
inline constexpr std::string_view DuplicateProducer = "E010";
inline constexpr std::string_view Cycle = "E011";
inline constexpr std::string_view InputWithParent = "E012";
inline constexpr std::string_view RepeatedBoxInput = "E013";
inline constexpr std::string_view UndrivenWire = "E014";
inline constexpr std::string_view UnknownWire = "E015";
inline constexpr std::string_view DuplicateWire = "E016";
inline constexpr std::string_view DuplicateBox = "E017";
inline constexpr std::string_view DuplicateBoundary = "E018";
inline constexpr std::string_view InvalidValues = "E019";
inline constexpr std::string_view CptArity = "E020";
inline constexpr std::string_view RowSumDefect = "E021";
inline constexpr std::string_view NegativeEntry = "E022";
}  // namespace dsl_code

std::string_view code_of(Violation v);

struct Diagnostic {
  std::string code;
  std::string message;
  std::string path;  // JSON pointer into the document, empty for syntax errors
  std::size_t line = 0;  // 1-based; 0 when unknown
  std::size_t column = 0;
};

class DslError : public std::runtime_error {
 public:
  explicit DslError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
  bool has(std::string_view code) const;

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ModelDocument {
  OpenModel model;
  std::optional<std::string> title;
  std::optional<std::string> notes;
};

/// Throws DslError carrying every problem found.
ModelDocument parse_document(std::string_view text, const Tolerances& tol = {});
OpenModel parse(std::string_view text, const Tolerances& tol = {});
ModelDocument load_document(const std::string& path, const Tolerances& tol = {});

/// Empty when the document is a valid model.
std::vector<Diagnostic> check(std::string_view text, const Tolerances& tol = {});

/// Canonical form: declaration order throughout, reals with 17 significant digits.
std::string serialize(const ModelDocument& doc);
std::string serialize(const OpenModel& model);

/// Shortest-exact rendering used for every real the project prints.
std::string format_real(double x);

struct ParsedObservation {
  Observation observation;
  std::optional<std::string> warning;
};

/// A value label (sharp), comma-separated labels for several wires, or an
/// inline JSON array of weights over `target` (normalised, with a warning when
/// the defect exceeds tol.channel). InvalidArgument on malformed input.
ParsedObservation parse_observation(std::string_view spec, const Shape& target,
                                    const Tolerances& tol = {});

}  // namespace catinf
