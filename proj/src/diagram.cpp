#include "catinf/diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "catinf/error.hpp"

namespace catinf {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::DuplicateProducer: return "DuplicateProducer";
    case Violation::Cycle: return "Cycle";
    case Violation::InputWithParent: return "InputWithParent";
    case Violation::RepeatedBoxInput: return "RepeatedBoxInput";
    case Violation::UndrivenWire: return "UndrivenWire";
    case Violation::UnknownWire: return "UnknownWire";
    case Violation::DuplicateWire: return "DuplicateWire";
    case Violation::DuplicateBox: return "DuplicateBox";
    case Violation::DuplicateBoundary: return "DuplicateBoundary";
  }
  return "Unknown";
}

bool DiagramReport::has(Violation v) const {
  return std::any_of(issues.begin(), issues.end(),
                     [v](const DiagramIssue& i) { return i.kind == v; });
}

DiagramReport validate_diagram(const NetworkDiagram& d) {
  DiagramReport report;
  auto add = [&](Violation kind, const std::string& subject, std::string message) {
    report.issues.push_back({kind, subject, std::move(message)});
  };

  std::set<std::string> wires;
  for (const auto& w : d.wires) {
    if (!wires.insert(w).second) add(Violation::DuplicateWire, w, "wire '" + w + "' declared twice");
  }
  std::set<std::string> box_names;
  std::map<std::string, std::vector<std::string>> producers;
  for (const auto& b : d.boxes) {
    if (!box_names.insert(b.name).second) {
      add(Violation::DuplicateBox, b.name, "box name '" + b.name + "' used twice");
    }
    if (!wires.count(b.output)) {
      add(Violation::UnknownWire, b.output,
          "box '" + b.name + "' outputs undeclared wire '" + b.output + "'");
    }
    producers[b.output].push_back(b.name);
    std::set<std::string> seen;
    for (const auto& in : b.inputs) {
      if (!wires.count(in)) {
        add(Violation::UnknownWire, in,
            "box '" + b.name + "' reads undeclared wire '" + in + "'");
      }
      if (!seen.insert(in).second) {
        add(Violation::RepeatedBoxInput, in,
            "wire '" + in + "' feeds box '" + b.name + "' more than once");
      }
    }
  }
  for (const auto& [wire, boxes] : producers) {
    if (boxes.size() > 1) {
      add(Violation::DuplicateProducer, wire,
          "wire '" + wire + "' is produced by " + std::to_string(boxes.size()) + " boxes");
    }
  }

  auto check_boundary = [&](const std::vector<std::string>& list, const char* what) {
    std::set<std::string> seen;
    for (const auto& w : list) {
      if (!wires.count(w)) {
        add(Violation::UnknownWire, w, std::string(what) + " '" + w + "' is not a declared wire");
      }
      if (!seen.insert(w).second) {
        add(Violation::DuplicateBoundary, w, std::string(what) + " '" + w + "' listed twice");
      }
    }
  };
  check_boundary(d.inputs, "input");
  check_boundary(d.outputs, "output");

  const std::set<std::string> inputs(d.inputs.begin(), d.inputs.end());
  for (const auto& w : d.inputs) {
    if (producers.count(w)) {
      add(Violation::InputWithParent, w, "input wire '" + w + "' is produced by a box");
    }
  }
  for (const auto& w : d.wires) {
    if (!inputs.count(w) && !producers.count(w)) {
      add(Violation::UndrivenWire, w, "wire '" + w + "' is neither an input nor produced by a box");
    }
  }

  // Kahn's algorithm over wires; whatever is never released lies on or after a cycle.
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& w : wires) indegree[w] = 0;
  for (const auto& b : d.boxes) {
    if (!wires.count(b.output)) continue;
    std::set<std::string> distinct(b.inputs.begin(), b.inputs.end());
    for (const auto& in : distinct) {
      if (!wires.count(in)) continue;
      children[in].push_back(b.output);
      ++indegree[b.output];
    }
  }
  std::vector<std::string> ready;
  for (const auto& [w, deg] : indegree) if (deg == 0) ready.push_back(w);
  std::size_t released = 0;
  while (!ready.empty()) {
    auto w = ready.back();
    ready.pop_back();
    ++released;
    for (const auto& c : children[w]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (released != wires.size()) {
    std::string stuck;
    for (const auto& [w, deg] : indegree) {
      if (deg > 0) stuck += (stuck.empty() ? "" : ", ") + w;
    }
    add(Violation::Cycle, stuck, "wires {" + stuck + "} lie on a directed cycle");
  }
  return report;
}

std::vector<std::size_t> topological_order(const NetworkDiagram& d) {
  std::set<std::string> available(d.inputs.begin(), d.inputs.end());
  std::vector<bool> done(d.boxes.size(), false);
  std::vector<std::size_t> order;
  while (order.size() < d.boxes.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < d.boxes.size(); ++i) {
      if (done[i]) continue;
      const auto& ins = d.boxes[i].inputs;
      if (std::all_of(ins.begin(), ins.end(),
                      [&](const std::string& w) { return available.count(w) > 0; })) {
        done[i] = true;
        order.push_back(i);
        available.insert(d.boxes[i].output);
        progressed = true;
        break;
      }
    }
    if (!progressed) fail(ErrorCode::InvalidDiagram, "diagram has no topological order");
  }
  return order;
}

std::vector<std::string> OpenDAG::parents(const std::string& v) const {
  std::vector<std::string> out;
  for (const auto& [p, c] : edges) {
    if (c == v) out.push_back(p);
  }
  return out;
}

namespace {

NetworkDiagram unchecked_diagram(const OpenDAG& g) {
  NetworkDiagram d;
  d.wires = g.vertices;
  d.inputs = g.inputs;
  d.outputs = g.outputs;
  const std::set<std::string> inputs(g.inputs.begin(), g.inputs.end());
  for (const auto& v : g.vertices) {
    if (inputs.count(v)) continue;
    d.boxes.push_back(Box{"c_" + v, g.parents(v), v});
  }
  return d;
}

}  // namespace

std::vector<std::string> validate_dag(const OpenDAG& g) {
  std::vector<std::string> problems;
  std::set<std::string> vs;
  for (const auto& v : g.vertices) {
    if (!vs.insert(v).second) problems.push_back("vertex '" + v + "' repeated");
  }
  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& e : g.edges) {
    if (!vs.count(e.first) || !vs.count(e.second)) {
      problems.push_back("edge " + e.first + "->" + e.second + " uses an unknown vertex");
    }
    if (e.first == e.second) problems.push_back("self-loop at '" + e.first + "'");
    if (!seen_edges.insert(e).second) {
      problems.push_back("edge " + e.first + "->" + e.second + " repeated");
    }
  }
  const std::set<std::string> inputs(g.inputs.begin(), g.inputs.end());
  for (const auto& i : g.inputs) {
    if (!vs.count(i)) problems.push_back("input '" + i + "' is not a vertex");
    if (!g.parents(i).empty()) problems.push_back("input vertex '" + i + "' has parents");
  }
  if (inputs.size() != g.inputs.size()) problems.push_back("input listed twice");
  const std::set<std::string> outputs(g.outputs.begin(), g.outputs.end());
  for (const auto& o : g.outputs) {
    if (!vs.count(o)) problems.push_back("output '" + o + "' is not a vertex");
  }
  if (outputs.size() != g.outputs.size()) problems.push_back("output listed twice");
  if (problems.empty()) {
    const auto report = validate_diagram(unchecked_diagram(g));
    if (report.has(Violation::Cycle)) problems.push_back("graph has a directed cycle");
  }
  return problems;
}

NetworkDiagram dag_to_diagram(const OpenDAG& g) {
  const auto problems = validate_dag(g);
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::InvalidDAG, msg);
  }
  return unchecked_diagram(g);
}

OpenDAG diagram_to_dag(const NetworkDiagram& d) {
  OpenDAG g;
  g.vertices = d.wires;
  g.inputs = d.inputs;
  g.outputs = d.outputs;
  // Edges grouped by child in wire order, so parents() reproduces box inputs.
  for (const auto& w : d.wires) {
    for (const auto& b : d.boxes) {
      if (b.output != w) continue;
      for (const auto& in : b.inputs) g.edges.emplace_back(in, w);
    }
  }
  return g;
}

bool equivalent_up_to_box_renaming(const NetworkDiagram& a, const NetworkDiagram& b) {
  if (a.wires != b.wires || a.inputs != b.inputs || a.outputs != b.outputs) return false;
  if (a.boxes.size() != b.boxes.size()) return false;
  auto by_output = [](const NetworkDiagram& d) {
    std::map<std::string, std::vector<std::string>> m;
    for (const auto& box : d.boxes) m[box.output] = box.inputs;
    return m;
  };
  return by_output(a) == by_output(b);
}

// --- OpenModel -------------------------------------------------------------

OpenModel OpenModel::make(NetworkDiagram diagram, Interpretation interp,
                          const Tolerances& tol) {
  const auto report = validate_diagram(diagram);
  if (!report.valid()) {
    std::string msg = "invalid network diagram:";
    for (const auto& issue : report.issues) msg += "\n  " + issue.message;
    fail(ErrorCode::InvalidDiagram, msg);
  }
  if (interp.wire_types.size() != diagram.wires.size()) {
    fail(ErrorCode::InvalidModel, "interpretation must type exactly the diagram's wires");
  }
  for (const auto& w : diagram.wires) {
    auto it = interp.wire_types.find(w);
    if (it == interp.wire_types.end()) fail(ErrorCode::InvalidModel, "wire '" + w + "' has no type");
    if (it->second.name != w) {
      fail(ErrorCode::InvalidModel, "wire '" + w + "' typed under name '" + it->second.name + "'");
    }
  }
  if (interp.channels.size() != diagram.boxes.size()) {
    fail(ErrorCode::InvalidModel, "interpretation must assign exactly one channel per box");
  }
  OpenModel m(std::move(diagram), std::move(interp));
  for (const auto& b : m.diagram_.boxes) {
    auto it = m.interp_.channels.find(b.name);
    if (it == m.interp_.channels.end()) {
      fail(ErrorCode::InvalidModel, "box '" + b.name + "' has no channel");
    }
    const auto& ch = it->second;
    const Shape dom = m.shape_of(b.inputs);
    const Shape cod = m.shape_of({b.output});
    if (!(ch.dom() == dom) || !(ch.cod() == cod)) {
      fail(ErrorCode::InvalidModel, "box '" + b.name + "' expects " + describe(dom) + " -> " +
                                        describe(cod) + ", got " + describe(ch.dom()) +
                                        " -> " + describe(ch.cod()));
    }
    const auto flag = is_channel(ch, tol);
    if (!flag.is_channel) {
      std::ostringstream os;
      os << "box '" << b.name << "' is not a channel (row defect " << flag.max_row_defect << ")";
      fail(ErrorCode::InvalidModel, os.str());
    }
  }
  return m;
}

const WireType& OpenModel::wire_type(const std::string& wire) const {
  auto it = interp_.wire_types.find(wire);
  if (it == interp_.wire_types.end()) fail(ErrorCode::UnknownWire, "no wire '" + wire + "'");
  return it->second;
}

const Morphism& OpenModel::channel(const std::string& box) const {
  auto it = interp_.channels.find(box);
  if (it == interp_.channels.end()) fail(ErrorCode::InvalidModel, "no box '" + box + "'");
  return it->second;
}

std::optional<std::string> OpenModel::producer(const std::string& wire) const {
  for (const auto& b : diagram_.boxes) {
    if (b.output == wire) return b.name;
  }
  return std::nullopt;
}

Shape OpenModel::shape_of(const std::vector<std::string>& wires) const {
  std::vector<WireType> w;
  w.reserve(wires.size());
  for (const auto& name : wires) w.push_back(wire_type(name));
  return Shape(std::move(w));
}

std::vector<std::string> OpenModel::hidden_wires() const {
  std::set<std::string> boundary(diagram_.inputs.begin(), diagram_.inputs.end());
  boundary.insert(diagram_.outputs.begin(), diagram_.outputs.end());
  std::vector<std::string> out;
  for (const auto& w : diagram_.wires) {
    if (!boundary.count(w)) out.push_back(w);
  }
  return out;
}

namespace {

// (id_L ⊗ c) ∘ (id_L ⊗ select) ∘ copy_L applied after `live`: appends the
// box output wire, weighting each live configuration by c(y | inputs).
Morphism attach_box(const Morphism& live, const Morphism& channel,
                    const std::vector<std::string>& inputs) {
  const Shape& l = live.cod();
  const auto pos = positions_of(l, inputs);
  const auto in_strides = channel.dom().strides();
  const auto ny = channel.cols();
  std::vector<std::size_t> input_index(l.cardinality());
  for (std::size_t c = 0; c < l.cardinality(); ++c) {
    const auto digits = l.decode(c);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) idx += digits[pos[k]] * in_strides[k];
    input_index[c] = idx;
  }
  const Shape cod = l + channel.cod();
  std::vector<double> out(live.rows() * cod.cardinality(), 0.0);
  for (std::size_t r = 0; r < live.rows(); ++r) {
    for (std::size_t c = 0; c < l.cardinality(); ++c) {
      const double w = live(r, c);
      if (w == 0.0) continue;
      const auto crow = channel.row(input_index[c]);
      double* o = out.data() + r * cod.cardinality() + c * ny;
      for (std::size_t y = 0; y < ny; ++y) o[y] = w * crow[y];
    }
  }
  return Morphism(live.dom(), cod, std::move(out));
}

}  // namespace

Morphism total_channel(const OpenModel& m, const std::optional<std::vector<std::size_t>>& order) {
  const auto& d = m.diagram();
  const auto boxes = order ? *order : topological_order(d);
  {
    auto sorted = boxes;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = sorted.size() == d.boxes.size();
    for (std::size_t i = 0; permutation && i < sorted.size(); ++i) permutation = sorted[i] == i;
    if (!permutation) fail(ErrorCode::InvalidModel, "evaluation order is not a permutation of the boxes");
  }
  Morphism live = identity(m.input_shape());
  for (auto b : boxes) {
    const auto& box = d.boxes[b];
    for (const auto& in : box.inputs) {
      if (!live.cod().find(in)) {
        fail(ErrorCode::InvalidModel, "box '" + box.name + "' evaluated before its input '" +
                                          in + "' is available");
      }
    }
    live = attach_box(live, m.channel(box.name), box.inputs);
  }
  auto keep = m.hidden_wires();
  keep.insert(keep.end(), d.outputs.begin(), d.outputs.end());
  return reorder_cod(marginal(live, keep), keep);
}

Morphism output_channel(const OpenModel& m) {
  return reorder_cod(marginal(total_channel(m), m.diagram().outputs), m.diagram().outputs);
}

// --- composition -----------------------------------------------------------

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  for (int k = 2;; ++k) {
    auto candidate = base + "#" + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

struct Renaming {
  std::map<std::string, std::string> wires;
  std::map<std::string, std::string> boxes;

  std::string wire(const std::string& w) const {
    auto it = wires.find(w);
    return it == wires.end() ? w : it->second;
  }
  std::string box(const std::string& b) const {
    auto it = boxes.find(b);
    return it == boxes.end() ? b : it->second;
  }
};

// Renames m2's wires (except `shared`) and boxes that collide with m1's.
Renaming plan_renaming(const OpenModel& m1, const OpenModel& m2,
                       const std::set<std::string>& shared) {
  Renaming r;
  std::set<std::string> taken(m1.diagram().wires.begin(), m1.diagram().wires.end());
  taken.insert(m2.diagram().wires.begin(), m2.diagram().wires.end());
  const std::set<std::string> m1_wires(m1.diagram().wires.begin(), m1.diagram().wires.end());
  for (const auto& w : m2.diagram().wires) {
    if (shared.count(w) || !m1_wires.count(w)) continue;
    auto fresh = fresh_name(w, taken);
    taken.insert(fresh);
    r.wires[w] = fresh;
  }
  std::set<std::string> taken_boxes;
  for (const auto& b : m1.diagram().boxes) taken_boxes.insert(b.name);
  for (const auto& b : m2.diagram().boxes) taken_boxes.insert(b.name);
  std::set<std::string> m1_boxes;
  for (const auto& b : m1.diagram().boxes) m1_boxes.insert(b.name);
  for (const auto& b : m2.diagram().boxes) {
    if (!m1_boxes.count(b.name)) continue;
    auto fresh = fresh_name(b.name, taken_boxes);
    taken_boxes.insert(fresh);
    r.boxes[b.name] = fresh;
  }
  return r;
}

// Copies m2's wires (skipping `shared`), boxes and channels into d/interp.
void absorb(const OpenModel& m2, const Renaming& r, const std::set<std::string>& shared,
            NetworkDiagram& d, Interpretation& interp) {
  for (const auto& w : m2.diagram().wires) {
    if (shared.count(w)) continue;
    const auto name = r.wire(w);
    d.wires.push_back(name);
    auto t = m2.wire_type(w);
    t.name = name;
    interp.wire_types[name] = t;
  }
  for (const auto& b : m2.diagram().boxes) {
    Box nb{r.box(b.name), {}, r.wire(b.output)};
    for (const auto& in : b.inputs) nb.inputs.push_back(r.wire(in));
    const auto& ch = m2.channel(b.name);
    interp.channels.emplace(nb.name, ch.with_shapes(ch.dom().renamed(r.wires),
                                                    ch.cod().renamed(r.wires)));
    d.boxes.push_back(std::move(nb));
  }
}

}  // namespace

OpenModel seq_compose(const OpenModel& m1, const OpenModel& m2) {
  if (!(m1.output_shape() == m2.input_shape())) {
    fail(ErrorCode::BoundaryMismatch, "outputs " + describe(m1.output_shape()) +
                                          " do not match inputs " + describe(m2.input_shape()));
  }
  const std::set<std::string> shared(m2.diagram().inputs.begin(), m2.diagram().inputs.end());
  const auto r = plan_renaming(m1, m2, shared);
  NetworkDiagram d = m1.diagram();
  Interpretation interp = m1.interpretation();
  absorb(m2, r, shared, d, interp);
  d.outputs.clear();
  for (const auto& o : m2.diagram().outputs) d.outputs.push_back(r.wire(o));
  return OpenModel::make(std::move(d), std::move(interp));
}

OpenModel par_compose(const OpenModel& m1, const OpenModel& m2) {
  const auto r = plan_renaming(m1, m2, {});
  NetworkDiagram d = m1.diagram();
  Interpretation interp = m1.interpretation();
  absorb(m2, r, {}, d, interp);
  for (const auto& i : m2.diagram().inputs) d.inputs.push_back(r.wire(i));
  for (const auto& o : m2.diagram().outputs) d.outputs.push_back(r.wire(o));
  return OpenModel::make(std::move(d), std::move(interp));
}

// --- builders --------------------------------------------------------------

namespace {

const WireType& single_wire(const Shape& s, const char* what) {
  if (s.rank() != 1) {
    fail(ErrorCode::ShapeMismatch, std::string(what) + " must be a single wire, got " + describe(s));
  }
  return s.wire(0);
}

void require_shape(const Shape& actual, const Shape& expected, const char* what) {
  if (!(actual == expected)) {
    fail(ErrorCode::ShapeMismatch, std::string(what) + ": expected " + describe(expected) +
                                       ", got " + describe(actual));
  }
}

// Same values, new name.
WireType relabel(const WireType& w, std::string name) { return WireType{std::move(name), w.values}; }

void require_values(const Shape& s, const std::vector<const WireType*>& expected, const char* what) {
  bool ok = s.rank() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = s.wire(i).values == expected[i]->values;
  }
  if (!ok) fail(ErrorCode::ShapeMismatch, std::string(what) + " has mismatched value sets: " + describe(s));
}

struct ModelBuilder {
  NetworkDiagram d;
  Interpretation interp;

  void wire(const WireType& t) {
    d.wires.push_back(t.name);
    interp.wire_types[t.name] = t;
  }
  void box(const std::string& name, const std::vector<std::string>& inputs,
           const std::string& output, const Morphism& ch) {
    d.boxes.push_back(Box{name, inputs, output});
    std::vector<WireType> dom;
    for (const auto& i : inputs) dom.push_back(interp.wire_types.at(i));
    interp.channels.emplace(name, ch.with_shapes(Shape(dom), Shape{interp.wire_types.at(output)}));
  }
  OpenModel finish() { return OpenModel::make(std::move(d), std::move(interp)); }
};

std::string step_name(const std::string& base, std::size_t t) {
  return base + "_" + std::to_string(t);
}

}  // namespace

OpenModel build_simple(const Morphism& prior, const Morphism& likelihood) {
  if (!prior.is_state()) fail(ErrorCode::ShapeMismatch, "prior must be a state");
  const auto& s = single_wire(prior.cod(), "prior codomain");
  require_shape(likelihood.dom(), prior.cod(), "likelihood domain");
  const auto& o = single_wire(likelihood.cod(), "likelihood codomain");
  ModelBuilder b;
  b.wire(s);
  b.wire(o);
  b.box("sigma", {}, s.name, prior);
  b.box("c", {s.name}, o.name, likelihood);
  b.d.outputs = {o.name};
  return b.finish();
}

OpenModel build_open_simple(const Morphism& prior, const Morphism& likelihood) {
  const auto& s = single_wire(prior.cod(), "prior codomain");
  require_shape(likelihood.dom(), prior.dom() + prior.cod(), "likelihood domain");
  const auto& o = single_wire(likelihood.cod(), "likelihood codomain");
  ModelBuilder b;
  for (const auto& w : prior.dom().wires()) b.wire(w);
  b.wire(s);
  b.wire(o);
  const auto inputs = prior.dom().names();
  b.box("sigma", inputs, s.name, prior);
  auto lik_inputs = inputs;
  lik_inputs.push_back(s.name);
  b.box("c", lik_inputs, o.name, likelihood);
  b.d.inputs = inputs;
  b.d.outputs = {o.name};
  return b.finish();
}

OpenModel build_discrete_time(const Morphism& initial, const Morphism& observation,
                              const Morphism& transition, std::size_t steps) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "discrete-time model needs at least one step");
  return build_discrete_time(initial, std::vector<Morphism>(steps, observation),
                             std::vector<Morphism>(steps - 1, transition));
}

OpenModel build_discrete_time(const Morphism& initial, const std::vector<Morphism>& observations,
                              const std::vector<Morphism>& transitions) {
  const auto n = observations.size();
  if (n < 1) fail(ErrorCode::InvalidArgument, "discrete-time model needs at least one step");
  if (transitions.size() != n - 1) {
    fail(ErrorCode::ShapeMismatch, "need exactly one transition per step after the first");
  }
  if (!initial.is_state()) fail(ErrorCode::ShapeMismatch, "initial distribution must be a state");
  const auto& s = single_wire(initial.cod(), "initial codomain");
  const auto& o = single_wire(observations[0].cod(), "observation codomain");
  ModelBuilder b;
  for (std::size_t t = 1; t <= n; ++t) b.wire(relabel(s, step_name(s.name, t)));
  for (std::size_t t = 1; t <= n; ++t) b.wire(relabel(o, step_name(o.name, t)));
  b.box("D", {}, step_name(s.name, 1), initial);
  for (std::size_t t = 1; t <= n; ++t) {
    const auto& a = observations[t - 1];
    require_values(a.dom(), {&s}, "observation domain");
    require_values(a.cod(), {&o}, "observation codomain");
    b.box(step_name("A", t), {step_name(s.name, t)}, step_name(o.name, t), a);
    if (t < n) {
      const auto& tr = transitions[t - 1];
      require_values(tr.dom(), {&s}, "transition domain");
      require_values(tr.cod(), {&s}, "transition codomain");
      b.box(step_name("B", t), {step_name(s.name, t)}, step_name(s.name, t + 1), tr);
    }
  }
  for (std::size_t t = 1; t <= n; ++t) b.d.outputs.push_back(step_name(o.name, t));
  return b.finish();
}

OpenModel build_policy_model(const Morphism& habits, const Morphism& initial,
                             const Morphism& observation, const Morphism& transition,
                             std::size_t steps) {
  if (steps < 2) fail(ErrorCode::InvalidArgument, "policy model needs at least two steps");
  if (!habits.is_state() || !initial.is_state()) {
    fail(ErrorCode::ShapeMismatch, "habits and initial distribution must be states");
  }
  const auto& p = single_wire(habits.cod(), "habits codomain");
  const auto& s = single_wire(initial.cod(), "initial codomain");
  const auto& o = single_wire(observation.cod(), "observation codomain");
  require_values(observation.dom(), {&s}, "observation domain");
  require_values(transition.dom(), {&s, &p}, "transition domain");
  require_values(transition.cod(), {&s}, "transition codomain");
  ModelBuilder b;
  b.wire(p);
  for (std::size_t t = 1; t <= steps; ++t) b.wire(relabel(s, step_name(s.name, t)));
  for (std::size_t t = 1; t <= steps; ++t) b.wire(relabel(o, step_name(o.name, t)));
  b.box("E", {}, p.name, habits);
  b.box("D", {}, step_name(s.name, 1), initial);
  for (std::size_t t = 1; t <= steps; ++t) {
    b.box(step_name("A", t), {step_name(s.name, t)}, step_name(o.name, t), observation);
    if (t < steps) {
      b.box(step_name("B", t), {step_name(s.name, t), p.name}, step_name(s.name, t + 1), transition);
    }
  }
  for (std::size_t t = 1; t <= steps; ++t) b.d.outputs.push_back(step_name(o.name, t));
  return b.finish();
}

ActinfModel build_actinf_model(const Morphism& habits, const Morphism& policy_to_state,
                               const Morphism& observation, const Morphism& transition,
                               const Morphism& future_observation) {
  if (!habits.is_state()) fail(ErrorCode::ShapeMismatch, "habits must be a state");
  const auto& p = single_wire(habits.cod(), "habits codomain");
  require_shape(policy_to_state.dom(), habits.cod(), "B domain");
  const auto& s = single_wire(policy_to_state.cod(), "B codomain");
  require_shape(observation.dom(), policy_to_state.cod(), "A domain");
  const auto& o = single_wire(observation.cod(), "A codomain");
  const bool uses_policy = transition.dom().rank() == 2;
  require_shape(transition.dom(), uses_policy ? Shape{s, p} : Shape{s}, "B' domain");
  const auto& sp = single_wire(transition.cod(), "B' codomain");
  require_shape(future_observation.dom(), transition.cod(), "A' domain");
  const auto& f = single_wire(future_observation.cod(), "A' codomain");
  const std::set<std::string> names{p.name, s.name, o.name, sp.name, f.name};
  if (names.size() != 5) {
    fail(ErrorCode::InvalidArgument, "active-inference wires P, S, O, S', F need distinct names");
  }
  ModelBuilder b;
  for (const auto* w : {&p, &s, &o, &sp, &f}) b.wire(*w);
  b.box("E", {}, p.name, habits);
  b.box("B", {p.name}, s.name, policy_to_state);
  b.box("A", {s.name}, o.name, observation);
  if (uses_policy) {
    b.box("B'", {s.name, p.name}, sp.name, transition);
  } else {
    b.box("B'", {s.name}, sp.name, transition);
  }
  b.box("A'", {sp.name}, f.name, future_observation);
  b.d.outputs = {o.name, f.name};
  return ActinfModel{b.finish(), p.name, s.name, o.name, sp.name, f.name};
}

namespace {

const Box& producing_box(const OpenModel& m, const std::string& wire) {
  for (const auto& b : m.diagram().boxes) {
    if (b.output == wire) return b;
  }
  fail(ErrorCode::InvalidModel, "wire '" + wire + "' has no producing box");
}

}  // namespace

ActinfModel as_actinf(const OpenModel& m) {
  const auto& d = m.diagram();
  auto reject = [](const std::string& why) -> void {
    fail(ErrorCode::InvalidModel, "not an active-inference model: " + why);
  };
  if (!m.closed()) reject("model has inputs");
  if (d.outputs.size() != 2) reject("expected outputs (O, F)");
  if (d.wires.size() != 5 || d.boxes.size() != 5) reject("expected five wires and five boxes");
  const auto& o = d.outputs[0];
  const auto& f = d.outputs[1];
  const auto& a = producing_box(m, o);
  const auto& ap = producing_box(m, f);
  if (a.inputs.size() != 1 || ap.inputs.size() != 1) reject("observation boxes need one input");
  const auto s = a.inputs[0];
  const auto sp = ap.inputs[0];
  const auto& b = producing_box(m, s);
  if (b.inputs.size() != 1) reject("present state box needs the policy as its only input");
  const auto p = b.inputs[0];
  if (!producing_box(m, p).inputs.empty()) reject("policy wire must carry a prior");
  const auto& bp = producing_box(m, sp);
  const std::set<std::string> bp_inputs(bp.inputs.begin(), bp.inputs.end());
  if (!bp_inputs.count(s) || bp_inputs.size() != bp.inputs.size() ||
      !(bp_inputs.size() == 1 || (bp_inputs.size() == 2 && bp_inputs.count(p)))) {
    reject("future transition must read S (and optionally P)");
  }
  const std::set<std::string> names{p, s, o, sp, f};
  if (names.size() != 5) reject("roles must be played by distinct wires");
  return ActinfModel{m, p, s, o, sp, f};
}

Morphism ActinfModel::habits() const {
  return model.channel(producing_box(model, policy).name);
}

Morphism ActinfModel::present_channel() const {
  const auto& b = model.channel(producing_box(model, state).name);
  const auto& a = model.channel(producing_box(model, observation).name);
  const Shape s = b.cod();
  return compose(tensor(identity(s), a), compose(copy(s, 2), b));
}

Morphism ActinfModel::future_channel() const {
  const auto& bp_box = producing_box(model, future_state);
  Morphism bp = model.channel(bp_box.name);
  const Shape s = model.shape_of({state});
  const Shape p = model.shape_of({policy});
  if (bp_box.inputs.size() == 1) {
    bp = compose(bp, tensor(identity(s), discard(p)));
  } else {
    bp = reorder_dom(bp, {state, policy});
  }
  const auto& ap = model.channel(producing_box(model, future_observation).name);
  const Shape sp = bp.cod();
  return compose(tensor(identity(sp), ap), compose(copy(sp, 2), bp));
}

}  // namespace catinf
