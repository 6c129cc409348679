#include "catinf/model_dsl.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "catinf/error.hpp"

namespace catinf {

using json = nlohmann::json;

std::string_view code_of(Violation v) {
  switch (v) {
    case Violation::DuplicateProducer: return dsl_code::DuplicateProducer;
    case Violation::Cycle: return dsl_code::Cycle;
    case Violation::InputWithParent: return dsl_code::InputWithParent;
    case Violation::RepeatedBoxInput: return dsl_code::RepeatedBoxInput;
    case Violation::UndrivenWire: return dsl_code::UndrivenWire;
    case Violation::UnknownWire: return dsl_code::UnknownWire;
    case Violation::DuplicateWire: return dsl_code::DuplicateWire;
    case Violation::DuplicateBox: return dsl_code::DuplicateBox;
    case Violation::DuplicateBoundary: return dsl_code::DuplicateBoundary;
  }
  return dsl_code::Schema;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "; ";
    out += d.code + ": " + d.message;
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct RawBox {
  Box box;
  std::vector<std::vector<double>> cpt;
  std::string path;
};

struct RawDocument {
  NetworkDiagram diagram;
  std::vector<std::vector<std::string>> values;  // per declared wire
  std::vector<RawBox> boxes;
  std::optional<std::string> title, notes;
};

class Reader {
 public:
  std::vector<Diagnostic> issues;

  void schema(const std::string& path, const std::string& msg) {
    issues.push_back({std::string(dsl_code::Schema), msg, path});
  }

  bool only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    bool ok = true;
    for (const auto& [k, _] : obj.items()) {
      bool known = false;
      for (const char* want : keys) known = known || k == want;
      if (!known) {
        schema(path + "/" + k, "unknown key '" + k + "'");
        ok = false;
      }
    }
    return ok;
  }

  std::optional<std::vector<std::string>> strings(const json& j, const std::string& path) {
    if (!j.is_array()) {
      schema(path, "expected an array of strings");
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_string()) {
        schema(path + "/" + std::to_string(k), "expected a string");
        return std::nullopt;
      }
      out.push_back(j[k].get<std::string>());
    }
    return out;
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key) || !obj[key].is_string()) {
      schema(path + "/" + key, std::string("expected string field '") + key + "'");
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  RawDocument read(const json& root) {
    RawDocument doc;
    if (!root.is_object()) {
      schema("", "document must be a JSON object");
      return doc;
    }
    only_keys(root, "", {"wires", "boxes", "inputs", "outputs", "metadata"});
    for (const char* key : {"wires", "boxes", "inputs", "outputs"}) {
      if (!root.contains(key)) schema(std::string("/") + key, std::string("missing '") + key + "'");
    }
    if (root.contains("wires")) read_wires(root["wires"], doc);
    if (root.contains("boxes")) read_boxes(root["boxes"], doc);
    if (root.contains("inputs")) {
      if (auto v = strings(root["inputs"], "/inputs")) doc.diagram.inputs = *v;
    }
    if (root.contains("outputs")) {
      if (auto v = strings(root["outputs"], "/outputs")) doc.diagram.outputs = *v;
    }
    if (root.contains("metadata")) read_metadata(root["metadata"], doc);
    return doc;
  }

 private:
  void read_wires(const json& ws, RawDocument& doc) {
    if (!ws.is_array()) return schema("/wires", "expected an array of wires");
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const std::string path = "/wires/" + std::to_string(k);
      const json& w = ws[k];
      if (!w.is_object()) {
        schema(path, "expected an object");
        continue;
      }
      only_keys(w, path, {"name", "values"});
      auto name = string(w, "name", path);
      std::optional<std::vector<std::string>> values;
      if (w.contains("values")) values = strings(w["values"], path + "/values");
      else schema(path + "/values", "missing 'values'");
      if (!name || !values) continue;
      doc.diagram.wires.push_back(*name);
      doc.values.push_back(*values);
    }
  }

  void read_boxes(const json& bs, RawDocument& doc) {
    if (!bs.is_array()) return schema("/boxes", "expected an array of boxes");
    for (std::size_t k = 0; k < bs.size(); ++k) {
      const std::string path = "/boxes/" + std::to_string(k);
      const json& b = bs[k];
      if (!b.is_object()) {
        schema(path, "expected an object");
        continue;
      }
      only_keys(b, path, {"name", "inputs", "output", "cpt"});
      auto name = string(b, "name", path);
      auto output = string(b, "output", path);
      std::optional<std::vector<std::string>> inputs;
      if (b.contains("inputs")) inputs = strings(b["inputs"], path + "/inputs");
      else schema(path + "/inputs", "missing 'inputs'");
      auto cpt = read_cpt(b, path);
      if (!name || !output || !inputs || !cpt) continue;
      RawBox raw{Box{*name, *inputs, *output}, std::move(*cpt), path};
      doc.diagram.boxes.push_back(raw.box);
      doc.boxes.push_back(std::move(raw));
    }
  }

  std::optional<std::vector<std::vector<double>>> read_cpt(const json& b, const std::string& path) {
    const std::string at = path + "/cpt";
    if (!b.contains("cpt") || !b["cpt"].is_array()) {
      schema(at, "expected 'cpt' as an array of rows");
      return std::nullopt;
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < b["cpt"].size(); ++r) {
      const json& row = b["cpt"][r];
      if (!row.is_array()) {
        schema(at + "/" + std::to_string(r), "expected a row of numbers");
        return std::nullopt;
      }
      std::vector<double> vals;
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (!row[c].is_number()) {
          schema(at + "/" + std::to_string(r) + "/" + std::to_string(c), "expected a number");
          return std::nullopt;
        }
        vals.push_back(row[c].get<double>());
      }
      rows.push_back(std::move(vals));
    }
    return rows;
  }

  void read_metadata(const json& m, RawDocument& doc) {
    if (!m.is_object()) return schema("/metadata", "expected an object");
    only_keys(m, "/metadata", {"title", "notes"});
    if (m.contains("title")) doc.title = string(m, "title", "/metadata");
    if (m.contains("notes")) doc.notes = string(m, "notes", "/metadata");
  }
};

std::optional<ModelDocument> build(std::string_view text, const Tolerances& tol,
                                   std::vector<Diagnostic>& issues) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    const auto [line, col] = line_column(text, offset);
    issues.push_back({std::string(dsl_code::Syntax), e.what(), "", line, col});
    return std::nullopt;
  }

  Reader reader;
  RawDocument raw = reader.read(root);
  issues = std::move(reader.issues);
  if (!issues.empty()) return std::nullopt;

  Interpretation interp;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < raw.diagram.wires.size(); ++k) {
    const auto& name = raw.diagram.wires[k];
    if (!seen.insert(name).second) continue;  // reported by diagram validation
    try {
      interp.wire_types.emplace(name, WireType::make(name, raw.values[k]));
    } catch (const Error& e) {
      issues.push_back({std::string(dsl_code::InvalidValues), e.what(),
                        "/wires/" + std::to_string(k) + "/values"});
    }
  }

  for (const auto& issue : validate_diagram(raw.diagram).issues) {
    issues.push_back({std::string(code_of(issue.kind)), issue.message, ""});
  }

  for (const auto& rb : raw.boxes) {
    const auto& b = rb.box;
    auto typed = [&](const std::string& w) { return interp.wire_types.count(w) > 0; };
    bool ok = typed(b.output);
    for (const auto& in : b.inputs) ok = ok && typed(in);
    if (!ok) continue;  // unknown wires already reported

    std::vector<WireType> dom;
    for (const auto& in : b.inputs) dom.push_back(interp.wire_types.at(in));
    const Shape ds(dom);
    const Shape cs{interp.wire_types.at(b.output)};
    const auto path = rb.path + "/cpt";
    bool arity_ok = rb.cpt.size() == ds.cardinality();
    for (const auto& row : rb.cpt) arity_ok = arity_ok && row.size() == cs.cardinality();
    if (!arity_ok) {
      issues.push_back({std::string(dsl_code::CptArity),
                        "box '" + b.name + "' needs " + std::to_string(ds.cardinality()) +
                            " rows of " + std::to_string(cs.cardinality()) + " entries",
                        path});
      continue;
    }
    std::vector<double> entries;
    bool entries_ok = true;
    for (std::size_t r = 0; r < rb.cpt.size(); ++r) {
      double total = 0.0;
      bool row_ok = true;
      for (std::size_t c = 0; c < rb.cpt[r].size(); ++c) {
        const double x = rb.cpt[r][c];
        if (!std::isfinite(x) || x < 0.0) {
          issues.push_back({std::string(dsl_code::NegativeEntry),
                            "box '" + b.name + "' has a negative or non-finite entry",
                            path + "/" + std::to_string(r) + "/" + std::to_string(c)});
          row_ok = false;
        }
        total += x;
        entries.push_back(x);
      }
      if (row_ok && std::abs(total - 1.0) > tol.channel) {
        issues.push_back({std::string(dsl_code::RowSumDefect),
                          "box '" + b.name + "' row " + std::to_string(r) + " sums to " +
                              format_real(total),
                          path + "/" + std::to_string(r)});
        row_ok = false;
      }
      entries_ok = entries_ok && row_ok;
    }
    if (entries_ok) interp.channels.emplace(b.name, Morphism(ds, cs, std::move(entries)));
  }
  if (!issues.empty()) return std::nullopt;

  try {
    return ModelDocument{OpenModel::make(raw.diagram, std::move(interp), tol), raw.title, raw.notes};
  } catch (const Error& e) {
    issues.push_back({std::string(dsl_code::Schema), e.what(), ""});
    return std::nullopt;
  }
}

}  // namespace

DslError::DslError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

bool DslError::has(std::string_view code) const {
  for (const auto& d : diagnostics_) {
    if (d.code == code) return true;
  }
  return false;
}

std::vector<Diagnostic> check(std::string_view text, const Tolerances& tol) {
  std::vector<Diagnostic> issues;
  build(text, tol, issues);
  return issues;
}

ModelDocument parse_document(std::string_view text, const Tolerances& tol) {
  std::vector<Diagnostic> issues;
  auto doc = build(text, tol, issues);
  if (!doc) throw DslError(std::move(issues));
  return std::move(*doc);
}

OpenModel parse(std::string_view text, const Tolerances& tol) {
  return parse_document(text, tol).model;
}

ModelDocument load_document(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DslError({{std::string(dsl_code::Unreadable), "cannot read '" + path + "'", ""}});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), tol);
}

std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // also folds -0, e.g. a negated zero entropy
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string string_list(const std::vector<std::string>& xs) {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? ", " : "") + quoted(xs[k]);
  return out + "]";
}

}  // namespace

std::string serialize(const ModelDocument& doc) {
  const auto& d = doc.model.diagram();
  std::string out = "{\n  \"wires\": [";
  for (std::size_t k = 0; k < d.wires.size(); ++k) {
    const auto& w = doc.model.wire_type(d.wires[k]);
    out += k ? ",\n    " : "\n    ";
    out += "{\"name\": " + quoted(w.name) + ", \"values\": " + string_list(w.values) + "}";
  }
  out += d.wires.empty() ? "],\n" : "\n  ],\n";
  out += "  \"boxes\": [";
  for (std::size_t k = 0; k < d.boxes.size(); ++k) {
    const auto& b = d.boxes[k];
    const Morphism& c = doc.model.channel(b.name);
    out += k ? ",\n    " : "\n    ";
    out += "{\"name\": " + quoted(b.name) + ", \"inputs\": " + string_list(b.inputs) +
           ", \"output\": " + quoted(b.output) + ", \"cpt\": [";
    for (std::size_t r = 0; r < c.rows(); ++r) {
      out += r ? ",\n      [" : "\n      [";
      for (std::size_t col = 0; col < c.cols(); ++col) {
        out += (col ? ", " : "") + format_real(c(r, col));
      }
      out += "]";
    }
    out += "\n    ]}";
  }
  out += d.boxes.empty() ? "],\n" : "\n  ],\n";
  out += "  \"inputs\": " + string_list(d.inputs) + ",\n";
  out += "  \"outputs\": " + string_list(d.outputs);
  if (doc.title || doc.notes) {
    out += ",\n  \"metadata\": {";
    if (doc.title) out += "\"title\": " + quoted(*doc.title);
    if (doc.notes) out += std::string(doc.title ? ", " : "") + "\"notes\": " + quoted(*doc.notes);
    out += "}";
  }
  return out + "\n}\n";
}

std::string serialize(const OpenModel& model) {
  return serialize(ModelDocument{model, std::nullopt, std::nullopt});
}

ParsedObservation parse_observation(std::string_view spec, const Shape& target,
                                    const Tolerances& tol) {
  std::size_t first = spec.find_first_not_of(" \t");
  if (first == std::string_view::npos) fail(ErrorCode::InvalidArgument, "empty observation");
  if (spec[first] == '[') {
    json arr;
    try {
      arr = json::parse(spec.begin(), spec.end());
    } catch (const json::parse_error& e) {
      fail(ErrorCode::InvalidArgument, std::string("observation array: ") + e.what());
    }
    if (!arr.is_array() || arr.size() != target.cardinality()) {
      fail(ErrorCode::InvalidArgument, "observation array needs " +
                                           std::to_string(target.cardinality()) + " weights for " +
                                           describe(target));
    }
    std::vector<double> w;
    double total = 0.0;
    for (const auto& x : arr) {
      if (!x.is_number()) fail(ErrorCode::InvalidArgument, "observation weights must be numbers");
      const double v = x.get<double>();
      if (!std::isfinite(v) || v < 0.0) {
        fail(ErrorCode::InvalidArgument, "observation weights must be finite and nonnegative");
      }
      w.push_back(v);
      total += v;
    }
    if (total <= tol.zero) fail(ErrorCode::InvalidArgument, "observation weights sum to zero");
    std::optional<std::string> warning;
    if (std::abs(total - 1.0) > tol.channel) {
      warning = "observation weights summed to " + format_real(total) + " and were normalised";
    }
    if (total != 1.0) {
      for (double& v : w) v /= total;
    }
    return {Observation::soft(Morphism::state(target, std::move(w)), tol), warning};
  }
  std::vector<std::string> labels;
  std::string cur;
  for (char ch : spec) {
    if (ch == ',') {
      labels.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '\t') {
      cur += ch;
    }
  }
  labels.push_back(cur);
  if (labels.size() != target.rank()) {
    fail(ErrorCode::InvalidArgument, "expected " + std::to_string(target.rank()) +
                                         " value label(s) for " + describe(target));
  }
  return {Observation::sharp(target, labels), std::nullopt};
}

}  // namespace catinf
