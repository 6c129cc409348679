#include "gmod_cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "catinf/category.hpp"
#include "catinf/diagram.hpp"
#include "catinf/error.hpp"
#include "catinf/free_energy.hpp"
#include "catinf/model_dsl.hpp"
#include "catinf/updating.hpp"

namespace gmod {

namespace {

using namespace catinf;
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Output

Json real(double x) { return std::isinf(x) ? Json(x > 0 ? "inf" : "-inf") : Json(x); }
Json real(ExtendedReal x) { return real(x.value()); }

Json reals(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real(x));
  return a;
}

Json reals(std::span<const double> xs) { return reals(std::vector<double>(xs.begin(), xs.end())); }

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void emit(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close_pad(2 * static_cast<std::size_t>(depth), ' ');
  if (j.is_number_float()) {
    out += format_real(j.get<double>());
  } else if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(k).dump() + ": ";
      emit(v, out, depth + 1);
    }
    out += "\n" + close_pad + "}";
  } else if (j.is_array()) {
    if (std::all_of(j.begin(), j.end(), is_scalar)) {
      out += "[";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ", ";
        emit(j[k], out, depth + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) out += ",\n";
      out += pad;
      emit(j[k], out, depth + 1);
    }
    out += "\n" + close_pad + "]";
  } else {
    out += j.dump();
  }
}

std::string render(const Json& j) {
  std::string out;
  emit(j, out, 0);
  return out + "\n";
}

std::string csv_real(double x) { return format_real(x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct Style {
  bool color;
  std::string paint(const std::string& s, const char* code) const {
    return color ? std::string("\x1b[") + code + "m" + s + "\x1b[0m" : s;
  }
  std::string good(const std::string& s) const { return paint(s, "32"); }
  std::string bad(const std::string& s) const { return paint(s, "31"); }
  std::string warn(const std::string& s) const { return paint(s, "33"); }
};

// ---------------------------------------------------------------------------
// Configuration

struct RunConfig {
  std::string model;
  std::string second_model;
  std::string observe;
  std::string prefer;
  std::string q;
  std::string method = "pearl";
  std::string mode = "fe";
  std::string format = "json";
  std::string compose_kind;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  Tolerances tol;
};

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;
  Style style;
  std::vector<std::string> warnings;

  void warn(const std::string& w) {
    warnings.push_back(w);
    err << style.warn("warning: ") << w << "\n";
  }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Observation read_observation(Context& ctx, const std::string& spec, const Shape& target,
                             const char* flag) {
  if (spec.empty()) throw UsageError(std::string("missing ") + flag);
  auto parsed = parse_observation(spec, target, ctx.cfg.tol);
  if (parsed.warning) ctx.warn(*parsed.warning);
  return parsed.observation;
}

Json shape_labels(const Shape& s) {
  Json a = Json::array();
  for (std::size_t k = 0; k < s.cardinality(); ++k) a.push_back(s.label_of(k));
  return a;
}

Json wire_names(const Shape& s) {
  Json a = Json::array();
  for (const auto& n : s.names()) a.push_back(n);
  return a;
}

Json observation_json(const Observation& o) {
  return Json{{"wires", wire_names(o.shape())}, {"weights", reals(o.distribution().entries())}};
}

Json terms_json(const std::vector<Term>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(Json{{"name", t.name}, {"value", real(t.value)}});
  return a;
}

Json string_list(const std::vector<std::string>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(Context& ctx) {
  std::vector<Diagnostic> issues;
  std::optional<ModelDocument> doc;
  try {
    doc = load_document(ctx.cfg.model, ctx.cfg.tol);
  } catch (const DslError& e) {
    issues = e.diagnostics();
  }
  const bool valid = issues.empty();
  if (ctx.cfg.format == "json") {
    Json ds = Json::array();
    for (const auto& d : issues) {
      Json item{{"code", d.code}, {"message", d.message}, {"path", d.path}};
      if (d.line) {
        item["line"] = d.line;
        item["column"] = d.column;
      }
      ds.push_back(item);
    }
    Json j{{"schema", "validation-report/1"}, {"model", ctx.cfg.model}, {"valid", valid}};
    if (doc) {
      j["wires"] = doc->model.diagram().wires.size();
      j["boxes"] = doc->model.diagram().boxes.size();
    }
    j["diagnostics"] = ds;
    ctx.out << render(j);
  } else if (ctx.cfg.format == "csv") {
    ctx.out << "code,path,line,column,message\n";
    for (const auto& d : issues) {
      ctx.out << d.code << "," << csv_field(d.path) << "," << d.line << "," << d.column << ","
              << csv_field(d.message) << "\n";
    }
  } else if (valid) {
    const auto& d = doc->model.diagram();
    ctx.out << ctx.style.good("valid") << ": " << ctx.cfg.model << " (" << d.wires.size()
            << " wires, " << d.boxes.size() << " boxes, " << d.inputs.size() << " inputs, "
            << d.outputs.size() << " outputs)\n";
  } else {
    ctx.out << ctx.style.bad("invalid") << ": " << ctx.cfg.model << "\n";
    for (const auto& d : issues) {
      ctx.out << "  " << ctx.style.bad(d.code);
      if (d.line) ctx.out << " " << d.line << ":" << d.column;
      if (!d.path.empty()) ctx.out << " " << d.path;
      ctx.out << "  " << d.message << "\n";
    }
  }
  return valid ? kOk : kValidation;
}

UpdateMethod method_of(const std::string& m) {
  if (m == "sharp") return UpdateMethod::Sharp;
  if (m == "jeffrey") return UpdateMethod::Jeffrey;
  if (m == "vfe") return UpdateMethod::Vfe;
  return UpdateMethod::Pearl;
}

int cmd_perceive(Context& ctx) {
  const ModelDocument doc = load_document(ctx.cfg.model, ctx.cfg.tol);
  const OpenModel& m = doc.model;
  const Observation obs = read_observation(ctx, ctx.cfg.observe, m.output_shape(), "--observe");
  const Morphism joint = total_channel(m);
  const auto method = method_of(ctx.cfg.method);
  Posterior post = [&] {
    switch (method) {
      case UpdateMethod::Sharp:
        if (!obs.is_sharp()) throw UsageError("--method sharp needs a sharp observation");
        return sharp_update(joint, obs, ctx.cfg.tol);
      case UpdateMethod::Jeffrey: return jeffrey_update(joint, obs, ctx.cfg.tol);
      case UpdateMethod::Pearl: return pearl_update(joint, obs, ctx.cfg.tol);
      case UpdateMethod::Vfe: return vfe_update(joint, obs, ctx.cfg.tol);
    }
    return pearl_update(joint, obs, ctx.cfg.tol);
  }();
  const Morphism& q = post.morphism;

  if (ctx.cfg.format == "csv") {
    ctx.out << "input,state,probability\n";
    for (std::size_t i = 0; i < q.rows(); ++i) {
      for (std::size_t s = 0; s < q.cols(); ++s) {
        ctx.out << csv_field(q.dom().label_of(i)) << "," << csv_field(q.cod().label_of(s)) << ","
                << csv_real(q(i, s)) << "\n";
      }
    }
    return kOk;
  }

  Json posterior;
  if (m.closed()) {
    posterior = reals(q.row(0));
  } else {
    posterior = Json::array();
    for (std::size_t i = 0; i < q.rows(); ++i) {
      posterior.push_back(Json{{"input", q.dom().label_of(i)}, {"p", reals(q.row(i))}});
    }
  }
  const auto& d = post.diagnostics;
  Json zero_rows = Json::array();
  for (auto r : d.zero_rows) zero_rows.push_back(r);
  Json j{{"schema", "posterior/1"},
         {"model", ctx.cfg.model},
         {"method", std::string(to_string(post.method))},
         {"observation", observation_json(obs)},
         {"hidden", wire_names(q.cod())},
         {"labels", shape_labels(q.cod())},
         {"inputs", wire_names(q.dom())},
         {"posterior", posterior},
         {"diagnostics",
          Json{{"normalizers", reals(d.normalizers)},
               {"zero_rows", zero_rows},
               {"excluded_observations", string_list(d.excluded_observations)},
               {"out_of_support", d.out_of_support}}},
         {"warnings", string_list(ctx.warnings)}};
  ctx.out << render(j);
  return kOk;
}

int cmd_plan(Context& ctx) {
  const ModelDocument doc = load_document(ctx.cfg.model, ctx.cfg.tol);
  const ActinfModel am = as_actinf(doc.model);
  const Observation obs =
      read_observation(ctx, ctx.cfg.observe, doc.model.shape_of({am.observation}), "--observe");
  const Observation pref = read_observation(
      ctx, ctx.cfg.prefer, doc.model.shape_of({am.future_observation}), "--prefer");

  PlanReport r;
  std::optional<std::vector<double>> experimental;
  if (ctx.cfg.mode == "exact") {
    r = exact_active_inference(am, obs, pref, ctx.cfg.tol);
  } else if (ctx.cfg.mode == "fe") {
    r = approx_active_inference(am, obs, pref, ctx.cfg.tol);
  } else {
    r = exact_active_inference(am, obs, pref, ctx.cfg.tol);
    experimental = experimental_jeffrey_plan(am, obs, pref, ctx.cfg.tol);
    r.notes.push_back("jeffrey mode is experimental");
    r.tv_gap = total_variation(r.exact->plan, *experimental);
  }

  const std::size_t n = r.policies.size();
  auto cell = [](const auto& opt, std::size_t k) -> std::optional<double> {
    if (!opt) return std::nullopt;
    return (*opt)[k];
  };
  std::optional<std::vector<double>> exact_plan, oracle, evidence, fit, approx_plan, F, G;
  if (r.exact) {
    exact_plan = r.exact->plan;
    oracle = r.exact->oracle;
    evidence = r.exact->evidence;
    fit = r.exact->future_fit;
  }
  if (r.approx) {
    approx_plan = r.approx->plan;
    F.emplace();
    G.emplace();
    for (auto v : r.approx->vfe) F->push_back(v.value());
    for (auto v : r.approx->efe) G->push_back(v.value());
  }
  if (experimental) approx_plan = experimental;

  if (ctx.cfg.format == "csv") {
    ctx.out << "policy,habit,vfe,efe,evidence,future_fit,exact,oracle,"
            << (experimental ? "jeffrey" : "approx") << "\n";
    for (std::size_t k = 0; k < n; ++k) {
      ctx.out << csv_field(r.policies[k]) << "," << csv_real(r.habits[k]);
      for (const auto* col : {&F, &G, &evidence, &fit, &exact_plan, &oracle, &approx_plan}) {
        const auto v = cell(*col, k);
        ctx.out << "," << (v ? csv_real(*v) : "");
      }
      ctx.out << "\n";
    }
    return kOk;
  }

  Json rows = Json::array();
  for (std::size_t k = 0; k < n; ++k) {
    Json row{{"policy", r.policies[k]}, {"E", real(r.habits[k])}};
    if (F) row["F"] = real((*F)[k]);
    if (G) row["G"] = real((*G)[k]);
    if (evidence) row["evidence"] = real((*evidence)[k]);
    if (fit) row["future_fit"] = real((*fit)[k]);
    if (exact_plan) row["exact"] = real((*exact_plan)[k]);
    if (oracle) row["oracle"] = real((*oracle)[k]);
    if (approx_plan) row[experimental ? "jeffrey" : "approx"] = real((*approx_plan)[k]);
    rows.push_back(row);
  }
  Json j{{"schema", "plan-report/1"},
         {"model", ctx.cfg.model},
         {"mode", ctx.cfg.mode},
         {"policy_wire", r.policy_wire},
         {"observation", observation_json(obs)},
         {"preference", observation_json(pref)},
         {"policies", rows}};
  if (exact_plan) j["exact_plan"] = reals(*exact_plan);
  if (approx_plan) j[experimental ? "jeffrey_plan" : "approx_plan"] = reals(*approx_plan);
  j["tv_gap"] = r.tv_gap ? real(*r.tv_gap) : Json(nullptr);
  if (r.exact) {
    j["oracle_skipped"] = r.exact->oracle_skipped;
    if (oracle) {
      double diff = 0.0;
      for (std::size_t k = 0; k < n; ++k) diff = std::max(diff, std::abs((*oracle)[k] - (*exact_plan)[k]));
      j["oracle_max_abs_diff"] = real(diff);
    }
  }
  j["notes"] = string_list(r.notes);
  j["warnings"] = string_list(ctx.warnings);
  ctx.out << render(j);
  return kOk;
}

int cmd_fe(Context& ctx) {
  const ModelDocument doc = load_document(ctx.cfg.model, ctx.cfg.tol);
  const OpenModel& m = doc.model;
  if (!m.closed()) fail(ErrorCode::InvalidModel, "fe needs a closed model");
  if (ctx.cfg.observe.empty() == ctx.cfg.prefer.empty()) {
    throw UsageError("fe needs exactly one of --observe (VFE) or --prefer (EFE)");
  }
  if (!ctx.cfg.q.empty() && ctx.cfg.observe.empty()) {
    throw UsageError("--q only applies to the VFE (--observe)");
  }
  const Morphism joint = total_channel(m);
  FreeEnergyReport r;
  std::string kind;
  Json inputs;
  if (!ctx.cfg.observe.empty()) {
    kind = "vfe";
    const Observation obs = read_observation(ctx, ctx.cfg.observe, m.output_shape(), "--observe");
    const Shape hidden = m.shape_of(m.hidden_wires());
    Morphism q = ctx.cfg.q.empty() ? vfe_update(joint, obs, ctx.cfg.tol).morphism
                                   : read_observation(ctx, ctx.cfg.q, hidden, "--q").distribution();
    r = vfe(q, joint, obs, ctx.cfg.tol);
    inputs = Json{{"observation", observation_json(obs)},
                  {"q", Json{{"wires", wire_names(q.cod())},
                             {"weights", reals(q.entries())},
                             {"source", ctx.cfg.q.empty() ? "vfe_update" : "--q"}}}};
  } else {
    kind = "efe";
    const Observation pref = read_observation(ctx, ctx.cfg.prefer, m.output_shape(), "--prefer");
    r = efe(joint, pref, ctx.cfg.tol);
    inputs = Json{{"preference", observation_json(pref)}};
  }

  if (ctx.cfg.format == "csv") {
    ctx.out << "term,value\n" << "total," << csv_real(r.total.value()) << "\n";
    for (const auto& t : r.terms) ctx.out << csv_field(t.name) << "," << csv_real(t.value.value()) << "\n";
    for (const auto& t : r.alternative) {
      ctx.out << csv_field("alternative." + t.name) << "," << csv_real(t.value.value()) << "\n";
    }
    if (r.lower_bound) ctx.out << "lower_bound," << csv_real(r.lower_bound->value()) << "\n";
    if (r.upper_bound) ctx.out << "upper_bound," << csv_real(r.upper_bound->value()) << "\n";
    return kOk;
  }
  Json j{{"schema", "fe-report/1"}, {"model", ctx.cfg.model}, {"kind", kind}};
  for (const auto& [k, v] : inputs.items()) j[k] = v;
  j["total"] = real(r.total);
  j["terms"] = terms_json(r.terms);
  j["terms_sum"] = real(sum(r.terms));
  j["alternative"] = terms_json(r.alternative);
  if (r.lower_bound) j["lower_bound"] = real(*r.lower_bound);
  if (r.upper_bound) j["upper_bound"] = real(*r.upper_bound);
  j["consistent"] = r.consistent;
  j["warnings"] = string_list(ctx.warnings);
  ctx.out << render(j);
  return kOk;
}

int cmd_compose(Context& ctx) {
  const ModelDocument a = load_document(ctx.cfg.model, ctx.cfg.tol);
  const ModelDocument b = load_document(ctx.cfg.second_model, ctx.cfg.tol);
  const OpenModel c =
      ctx.cfg.compose_kind == "seq" ? seq_compose(a.model, b.model) : par_compose(a.model, b.model);
  ModelDocument doc{c, std::nullopt, std::nullopt};
  if (a.title && b.title) {
    doc.title = *a.title + (ctx.cfg.compose_kind == "seq" ? " ; " : " | ") + *b.title;
  }
  ctx.out << serialize(doc);
  return kOk;
}

// ---------------------------------------------------------------------------
// selfcheck: seeded spot checks of the laws the library relies on.

struct Checker {
  std::mt19937_64 rng;
  std::size_t counter = 0;

  double weight() {
    // exact zeros now and then, otherwise bounded away from zero
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(rng) < 0.15 ? 0.0 : 0.01 + u(rng);
  }
  WireType wire(std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> n(lo, hi);
    return WireType::indexed("W" + std::to_string(counter++), n(rng), "v");
  }
  Morphism channel(const Shape& dom, const Shape& cod) {
    std::vector<double> e(dom.cardinality() * cod.cardinality());
    for (std::size_t r = 0; r < dom.cardinality(); ++r) {
      double total = 0.0;
      for (std::size_t c = 0; c < cod.cardinality(); ++c) total += e[r * cod.cardinality() + c] = weight();
      if (total == 0.0) e[r * cod.cardinality()] = total = 1.0;
      for (std::size_t c = 0; c < cod.cardinality(); ++c) e[r * cod.cardinality() + c] /= total;
    }
    return Morphism(dom, cod, std::move(e));
  }
};

int cmd_selfcheck(Context& ctx) {
  Checker g{std::mt19937_64(ctx.cfg.seed)};
  struct Result {
    std::string name;
    double max_error = 0.0;
    double tolerance;
    std::size_t cases = 0;
  };
  Result counit{"copy counit", 0, 1e-9}, norm{"state normalisation", 0, 1e-9},
      coincide{"sharp update coincidence", 0, 1e-12}, factor{"exact planning factorisation", 0, 1e-9};
  for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
    const Shape x{g.wire(2, 4), g.wire(2, 3)};
    const Morphism lhs = compose(tensor(discard(x), identity(x)), copy(x, 2));
    counit.max_error = std::max(counit.max_error, max_abs_diff(lhs, identity(x)));
    ++counit.cases;

    const Morphism omega = scale(g.channel(Shape{}, x), 0.5 + g.weight());
    const Morphism rebuilt = scale(normalize(omega), compose(discard(x), omega).value());
    norm.max_error = std::max(norm.max_error, max_abs_diff(rebuilt, omega));
    ++norm.cases;

    const Shape so{g.wire(2, 3), g.wire(2, 3)};
    const Morphism joint = g.channel(Shape{}, so);
    const Shape o = so.select({1});
    for (std::size_t k = 0; k < o.cardinality(); ++k) {
      if (compose(tensor(discard(so.select({0})), identity(o)), joint).at(k) <= ctx.cfg.tol.zero) continue;
      const auto obs = Observation::sharp(o, {o.label_of(k)});
      const Morphism s = sharp_update(joint, obs, ctx.cfg.tol).morphism;
      for (const Morphism& other : {jeffrey_update(joint, obs, ctx.cfg.tol).morphism,
                                    pearl_update(joint, obs, ctx.cfg.tol).morphism,
                                    vfe_update(joint, obs, ctx.cfg.tol).morphism}) {
        coincide.max_error = std::max(coincide.max_error, max_abs_diff(s, other));
      }
      ++coincide.cases;
    }

    const WireType p = g.wire(1, 3), st = g.wire(2, 3), ob = g.wire(2, 3), sp = g.wire(2, 3),
                   f = g.wire(2, 3);
    const ActinfModel am = build_actinf_model(
        g.channel(Shape{}, Shape{p}), g.channel(Shape{p}, Shape{st}), g.channel(Shape{st}, Shape{ob}),
        g.channel(Shape{st, p}, Shape{sp}), g.channel(Shape{sp}, Shape{f}));
    const auto ov = Observation::soft(g.channel(Shape{}, Shape{ob}));
    const auto cv = Observation::soft(g.channel(Shape{}, Shape{f}));
    try {
      const PlanReport r = exact_active_inference(am, ov, cv, ctx.cfg.tol);
      factor.max_error = std::max(factor.max_error, total_variation(r.exact->plan, *r.exact->oracle) * 2);
      ++factor.cases;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyResult) throw;
    }
  }
  Json checks = Json::array();
  bool all = true;
  for (const Result* r : {&counit, &norm, &coincide, &factor}) {
    const bool ok = r->max_error <= r->tolerance;
    all = all && ok;
    checks.push_back(Json{{"name", r->name},
                          {"cases", r->cases},
                          {"max_error", real(r->max_error)},
                          {"tolerance", real(r->tolerance)},
                          {"passed", ok}});
  }
  ctx.out << render(Json{{"schema", "selfcheck/1"},
                         {"seed", ctx.cfg.seed},
                         {"trials", ctx.cfg.trials},
                         {"checks", checks},
                         {"passed", all}});
  return all ? kOk : kInternal;
}

// ---------------------------------------------------------------------------

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::EmptyResult:
    case ErrorCode::AllMinusInfinity:
    case ErrorCode::ShapeMismatch:
      return kDegenerate;
    case ErrorCode::UnknownWire:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidDAG:
    case ErrorCode::InvalidDiagram:
    case ErrorCode::InvalidModel:
    case ErrorCode::BoundaryMismatch:
      return kValidation;
  }
  return kInternal;
}

void report_failure(Context& ctx, const std::string& kind, const std::string& message,
                    const Json& details = Json()) {
  ctx.err << ctx.style.bad("error") << " [" << kind << "]: " << message << "\n";
  if (ctx.cfg.format == "json") {
    Json j{{"schema", "error/1"}, {"error", kind}, {"message", message}};
    if (!details.is_null()) j["diagnostics"] = details;
    ctx.out << render(j);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env) {
  RunConfig cfg;
  CLI::App app{"gmod: exact inference and active inference on finite generative models"};
  app.name("gmod");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sub, std::vector<std::string> formats = {"json", "csv"}) {
    if (!formats.empty()) sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--tol-channel", cfg.tol.channel, "row-sum tolerance for channels")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-zero", cfg.tol.zero, "threshold below which mass counts as zero")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  auto* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("model", cfg.model, "model file (.gmod.json)")->required();
  common(validate, {"text", "json", "csv"});

  auto* perceive = app.add_subcommand("perceive", "posterior over hidden wires after an observation");
  perceive->add_option("model", cfg.model)->required();
  perceive->add_option("--observe", cfg.observe, "label(s) or JSON weights over the outputs")->required();
  perceive->add_option("--method", cfg.method, "update rule")
      ->check(CLI::IsMember({"sharp", "jeffrey", "pearl", "vfe"}));
  common(perceive);

  auto* plan = app.add_subcommand("plan", "plan over policies of an active-inference model");
  plan->add_option("model", cfg.model)->required();
  plan->add_option("--observe", cfg.observe, "observation over O")->required();
  plan->add_option("--prefer", cfg.prefer, "preference over F")->required();
  plan->add_option("--mode", cfg.mode, "exact, fe, or the experimental jeffrey planner")
      ->check(CLI::IsMember({"exact", "fe", "jeffrey"}));
  common(plan);

  auto* fe = app.add_subcommand("fe", "VFE of a belief (--observe) or EFE (--prefer)");
  fe->add_option("model", cfg.model)->required();
  fe->add_option("--observe", cfg.observe, "observation over the outputs");
  fe->add_option("--prefer", cfg.prefer, "preference over the outputs");
  fe->add_option("--q", cfg.q, "belief over the hidden wires (default: its VFE update)");
  common(fe);

  auto* compose_cmd = app.add_subcommand("compose", "compose two models and print the result");
  compose_cmd->add_option("kind", cfg.compose_kind, "seq or par")
      ->required()
      ->check(CLI::IsMember({"seq", "par"}));
  compose_cmd->add_option("first", cfg.model)->required();
  compose_cmd->add_option("second", cfg.second_model)->required();
  common(compose_cmd, {});

  auto* selfcheck = app.add_subcommand("selfcheck", "seeded spot checks of the core laws");
  selfcheck->add_option("--trials", cfg.trials, "number of random cases")->check(CLI::PositiveNumber);
  common(selfcheck, {});

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  if (validate->parsed() && !validate->count("--format")) cfg.format = "text";

  Context ctx{cfg, out, err, Style{env.color}, {}};
  try {
    if (validate->parsed()) return cmd_validate(ctx);
    if (perceive->parsed()) return cmd_perceive(ctx);
    if (plan->parsed()) return cmd_plan(ctx);
    if (fe->parsed()) return cmd_fe(ctx);
    if (compose_cmd->parsed()) return cmd_compose(ctx);
    if (selfcheck->parsed()) return cmd_selfcheck(ctx);
  } catch (const DslError& e) {
    Json ds = Json::array();
    for (const auto& d : e.diagnostics()) ds.push_back(Json{{"code", d.code}, {"message", d.message}});
    const auto& diags = e.diagnostics();
    report_failure(ctx, diags.empty() ? "E002" : diags.front().code,
                   diags.size() == 1 ? diags.front().message : e.what(), ds);
    return kValidation;
  } catch (const UsageError& e) {
    report_failure(ctx, "usage", e.what());
    return kValidation;
  } catch (const Error& e) {
    report_failure(ctx, std::string(to_string(e.code())), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_failure(ctx, "internal", e.what());
    return kInternal;
  }
  return kInternal;
}

}  // namespace gmod
