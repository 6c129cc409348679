#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catinf/category.hpp"

namespace catinf {

/// A single-output box. Input order fixes the domain order of its channel.
struct Box {
  std::string name;
  std::vector<std::string> inputs;
  std::string output;

  bool operator==(const Box&) const = default;
};

/// Wiring of single-output boxes, copies and discards. Copies and discards are
/// implicit: a wire feeding several boxes is copied, an unused wire discarded.
struct NetworkDiagram {
  std::vector<std::string> wires;
  std::vector<Box> boxes;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  bool operator==(const NetworkDiagram&) const = default;
};

enum class Violation {
  DuplicateProducer,  // a wire is the output of more than one box
  Cycle,              // the induced wire graph has a directed cycle
  InputWithParent,    // a diagram input is produced by a box
  RepeatedBoxInput,   // a wire feeds the same box twice
  UndrivenWire,       // a non-input wire has no producing box
  UnknownWire,        // a box or boundary refers to an undeclared wire
  DuplicateWire,      // a wire name is declared twice
  DuplicateBox,       // a box name is used twice
  DuplicateBoundary,  // a wire is listed twice among inputs or outputs
};

std::string_view to_string(Violation v);

struct DiagramIssue {
  Violation kind;
  std::string subject;  // offending wire or box name
  std::string message;
};

struct DiagramReport {
  std::vector<DiagramIssue> issues;
  bool valid() const noexcept { return issues.empty(); }
  bool has(Violation v) const;
};

DiagramReport validate_diagram(const NetworkDiagram& d);

/// Boxes in a topological order (producers before consumers), stable with
/// respect to declaration order. Requires a valid diagram.
std::vector<std::size_t> topological_order(const NetworkDiagram& d);

/// Finite DAG with input and output vertex subsets. Parents of a vertex are
/// ordered by the position of their edge in `edges`.
struct OpenDAG {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::string, std::string>> edges;  // (parent, child)
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  std::vector<std::string> parents(const std::string& v) const;
  bool operator==(const OpenDAG&) const = default;
};

/// Empty when valid; otherwise one message per problem.
std::vector<std::string> validate_dag(const OpenDAG& g);

/// One box "c_<vertex>" per non-input vertex, inputs = its parents.
NetworkDiagram dag_to_diagram(const OpenDAG& g);
OpenDAG diagram_to_dag(const NetworkDiagram& d);

/// Equal wires and boundaries and, for each output wire, the same ordered
/// box inputs; box names and box declaration order are ignored.
bool equivalent_up_to_box_renaming(const NetworkDiagram& a, const NetworkDiagram& b);

/// Assignment of value sets to wires and channels to boxes.
struct Interpretation {
  std::map<std::string, WireType> wire_types;
  std::map<std::string, Morphism> channels;
};

/// A network diagram together with a checked interpretation in Mat(R+).
class OpenModel {
 public:
  /// Throws InvalidDiagram for wiring violations, InvalidModel when the
  /// interpretation is incomplete, mistyped, or assigns a non-channel.
  static OpenModel make(NetworkDiagram diagram, Interpretation interp,
                        const Tolerances& tol = {});

  const NetworkDiagram& diagram() const noexcept { return diagram_; }
  const Interpretation& interpretation() const noexcept { return interp_; }

  const WireType& wire_type(const std::string& wire) const;
  const Morphism& channel(const std::string& box) const;
  /// Name of the box producing `wire`, if any.
  std::optional<std::string> producer(const std::string& wire) const;

  Shape shape_of(const std::vector<std::string>& wires) const;
  Shape input_shape() const { return shape_of(diagram_.inputs); }
  Shape output_shape() const { return shape_of(diagram_.outputs); }
  /// Wires that are neither inputs nor outputs, in declaration order.
  std::vector<std::string> hidden_wires() const;
  bool closed() const noexcept { return diagram_.inputs.empty(); }

 private:
  OpenModel(NetworkDiagram d, Interpretation i)
      : diagram_(std::move(d)), interp_(std::move(i)) {}

  NetworkDiagram diagram_;
  Interpretation interp_;
};

/// Channel from the inputs to (hidden wires, then outputs). Boxes are
/// contracted one at a time in `order` (a topological order of box indices;
/// defaults to topological_order()). InvalidModel if `order` is not one.
Morphism total_channel(const OpenModel& m,
                       const std::optional<std::vector<std::size_t>>& order = std::nullopt);

/// Marginal of the total channel on the outputs, in declared output order.
Morphism output_channel(const OpenModel& m);

/// m1's outputs feed m2's inputs. Colliding wire and box names of m2 receive
/// the suffix "#2" (or "#3", ... if that is also taken).
OpenModel seq_compose(const OpenModel& m1, const OpenModel& m2);
OpenModel par_compose(const OpenModel& m1, const OpenModel& m2);

// Standard model shapes. Wire names come from the given morphisms' shapes;
// every box output must be a single wire.

/// prior σ on S, likelihood c : S -> O.
OpenModel build_simple(const Morphism& prior, const Morphism& likelihood);
/// prior σ : I -> S, likelihood c : I ⊗ S -> O.
OpenModel build_open_simple(const Morphism& prior, const Morphism& likelihood);

/// Hidden Markov model with wires S_1..S_n, O_1..O_n. `observation` is
/// S -> O, `transition` S -> S.
OpenModel build_discrete_time(const Morphism& initial, const Morphism& observation,
                              const Morphism& transition, std::size_t steps);
/// Per-step channels: observations.size() == n, transitions.size() == n - 1.
OpenModel build_discrete_time(const Morphism& initial,
                              const std::vector<Morphism>& observations,
                              const std::vector<Morphism>& transitions);

/// Adds a hidden policy wire with habits E; transition is S ⊗ P -> S.
OpenModel build_policy_model(const Morphism& habits, const Morphism& initial,
                             const Morphism& observation, const Morphism& transition,
                             std::size_t steps);

/// Closed active-inference model: habits E on P, B : P -> S, A : S -> O,
/// future transition B' : S ⊗ P -> S' (or S -> S'), A' : S' -> F.
/// Outputs are (O, F); P, S, S' are hidden.
struct ActinfModel {
  OpenModel model;
  std::string policy;
  std::string state;
  std::string observation;
  std::string future_state;
  std::string future_observation;

  Morphism habits() const;
  /// M1 : P -> S ⊗ O, the present-time part.
  Morphism present_channel() const;
  /// M2 : S ⊗ P -> S' ⊗ F, the future part.
  Morphism future_channel() const;
};

ActinfModel build_actinf_model(const Morphism& habits, const Morphism& policy_to_state,
                               const Morphism& observation, const Morphism& transition,
                               const Morphism& future_observation);

/// Recognises the active-inference shape in an arbitrary closed model (for
/// models loaded from files). InvalidModel if the wiring does not match.
ActinfModel as_actinf(const OpenModel& m);

}  // namespace catinf
