#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "catinf/error.hpp"
#include "catinf/model_dsl.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace catinf;
using testsupport::max_diff;

namespace {

void require_same_model(const OpenModel& a, const OpenModel& b) {
  REQUIRE(a.diagram() == b.diagram());
  for (const auto& w : a.diagram().wires) CHECK(a.wire_type(w) == b.wire_type(w));
  for (const auto& box : a.diagram().boxes) {
    const auto& fa = a.channel(box.name);
    const auto& fb = b.channel(box.name);
    REQUIRE(fa.entries().size() == fb.entries().size());
    for (std::size_t k = 0; k < fa.entries().size(); ++k) CHECK(fa.entries()[k] == fb.entries()[k]);
  }
}

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

const char* kMinimal = R"({"wires": [{"name": "S", "values": ["a", "b", "c"]}],
  "boxes": [{"name": "p", "inputs": [], "output": "S", "cpt": [[0.2, 0.3, 0.5]]}],
  "inputs": [], "outputs": ["S"]})";

}  // namespace

TEST_SUITE("dsl") {

TEST_CASE("minimal document is a state model") {
  const OpenModel m = parse(kMinimal);
  CHECK(m.closed());
  CHECK(max_diff(output_channel(m), {0.2, 0.3, 0.5}) == 0.0);
  CHECK(m.wire_type("S").values == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("four-vertex example parses") {
  const auto doc = load_document((testsupport::fixture_dir() / "dag_example.gmod.json").string());
  CHECK(doc.model.diagram().wires.size() == 4);
  CHECK(diagram_to_dag(doc.model.diagram()).edges.size() == 4);
  CHECK(doc.model.diagram().outputs == std::vector<std::string>{"X2", "X3"});
}

TEST_CASE("every fixture round-trips exactly and byte-stably") {
  const auto files = testsupport::valid_fixtures();
  REQUIRE(files.size() >= 8);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const ModelDocument doc = parse_document(testsupport::read_file(f));
    const std::string once = serialize(doc);
    const ModelDocument again = parse_document(once);
    require_same_model(doc.model, again.model);
    CHECK(again.title == doc.title);
    CHECK(again.notes == doc.notes);
    CHECK(serialize(again) == once);
    CHECK(serialize(parse_document(serialize(again))) == once);
  }
}

TEST_CASE("random models round-trip exactly") {
  testsupport::Rng rng(515);
  for (int t = 0; t < 100; ++t) {
    const OpenModel m = testsupport::random_model(rng, testsupport::random_dag(rng));
    const std::string text = serialize(m);
    const OpenModel back = parse(text);
    require_same_model(m, back);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("awkward reals survive the round trip") {
  const double third = 1.0 / 3.0, tiny = std::numeric_limits<double>::denorm_min();
  const WireType S = WireType::make("S", {"a", "b", "c"});
  const Morphism p = Morphism::state(Shape{S}, {third, 1.0 - third - tiny, tiny});
  const OpenModel m = OpenModel::make(NetworkDiagram{{"S"}, {{"p", {}, "S"}}, {}, {"S"}},
                                      Interpretation{{{"S", S}}, {{"p", p}}});
  require_same_model(m, parse(serialize(m)));
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("canonical layout") {
  const std::string text = serialize(parse(kMinimal));
  CHECK(text.find("\"wires\"") < text.find("\"boxes\""));
  CHECK(text.find("\"boxes\"") < text.find("\"inputs\""));
  CHECK(text.find("\"inputs\"") < text.find("\"outputs\""));
  CHECK(text.find("metadata") == std::string::npos);
  CHECK(text.find("0.20000000000000001") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("composed models keep their suffixed names") {
  const OpenModel a = parse(kMinimal), b = parse(kMinimal);
  const std::string text = serialize(par_compose(a, b));
  CHECK(text.find("\"p#2\"") != std::string::npos);
  CHECK(text.find("\"S#2\"") != std::string::npos);
  require_same_model(parse(text), par_compose(a, b));
}

TEST_CASE("each violation fixture reports its designated code") {
  const auto files = testsupport::invalid_fixtures();
  REQUIRE(files.size() == 15);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const auto found = check(testsupport::read_file(f));
    REQUIRE_FALSE(found.empty());
    for (const auto& d : found) CHECK(d.code == testsupport::designated_code(f));
    try {
      parse(testsupport::read_file(f));
      FAIL("expected a DslError");
    } catch (const DslError& e) {
      CHECK(e.has(testsupport::designated_code(f)));
    }
  }
}

TEST_CASE("row sum defect") {
  const std::string text = R"({"wires": [{"name": "S", "values": ["a", "b"]}],
    "boxes": [{"name": "p", "inputs": [], "output": "S", "cpt": [[0.6, 0.5]]}],
    "inputs": [], "outputs": ["S"]})";
  const auto found = check(text);
  REQUIRE(found.size() == 1);
  CHECK(found[0].code == "E021");
  CHECK(found[0].path == "/boxes/0/cpt/0");

  // within the channel tolerance is accepted as written
  const std::string close = R"({"wires": [{"name": "S", "values": ["a", "b"]}],
    "boxes": [{"name": "p", "inputs": [], "output": "S", "cpt": [[0.5, 0.5000000000001]]}],
    "inputs": [], "outputs": ["S"]})";
  CHECK(check(close).empty());
}

TEST_CASE("syntax errors carry a position") {
  const auto found = check("{\n  \"wires\": [\n    }\n");
  REQUIRE(found.size() == 1);
  CHECK(found[0].code == "E001");
  CHECK(found[0].line == 3);
  CHECK(found[0].column >= 5);
}

TEST_CASE("schema problems") {
  CHECK(codes(check(R"({"wires": [], "boxes": [], "inputs": []})")) == std::vector<std::string>{"E002"});
  CHECK(codes(check(R"([1, 2])")) == std::vector<std::string>{"E002"});
  CHECK(codes(check(R"({"wires": [{"name": "S", "values": "ab"}], "boxes": [], "inputs": [], "outputs": []})")) ==
        std::vector<std::string>{"E002"});
  const auto extra = check(R"({"wires": [], "boxes": [], "inputs": [], "outputs": [], "colour": 1})");
  REQUIRE(extra.size() == 1);
  CHECK(extra[0].path == "/colour");
  CHECK_THROWS_AS(load_document("/nonexistent/model.gmod.json"), DslError);
  try {
    load_document("/nonexistent/model.gmod.json");
  } catch (const DslError& e) {
    CHECK(e.has("E003"));
  }
}

TEST_CASE("several problems are reported together") {
  const std::string text = R"({"wires": [{"name": "A", "values": ["a0", "a1"]}, {"name": "B", "values": ["b0", "b1"]}],
    "boxes": [{"name": "f", "inputs": ["B"], "output": "A", "cpt": [[1, 0], [0, 1]]},
              {"name": "g", "inputs": ["A"], "output": "B", "cpt": [[1, 0], [0.5, -0.5]]}],
    "inputs": [], "outputs": ["A"]})";
  const auto found = codes(check(text));
  CHECK(std::find(found.begin(), found.end(), "E011") != found.end());
  CHECK(std::find(found.begin(), found.end(), "E022") != found.end());
}

TEST_CASE("violation kinds map to distinct codes") {
  std::set<std::string_view> seen;
  for (Violation v : {Violation::DuplicateProducer, Violation::Cycle, Violation::InputWithParent,
                      Violation::RepeatedBoxInput, Violation::UndrivenWire, Violation::UnknownWire,
                      Violation::DuplicateWire, Violation::DuplicateBox, Violation::DuplicateBoundary}) {
    CHECK(seen.insert(code_of(v)).second);
  }
  CHECK(code_of(Violation::DuplicateProducer) == "E010");
  CHECK(code_of(Violation::Cycle) == "E011");
  CHECK(code_of(Violation::InputWithParent) == "E012");
  CHECK(code_of(Violation::RepeatedBoxInput) == "E013");
}

TEST_CASE("observations from the command line") {
  const Shape O{WireType::make("O", {"o0", "o1", "o2"})};
  const auto sharp = parse_observation("o1", O);
  CHECK(sharp.observation.is_sharp());
  CHECK(sharp.observation.point() == 1);
  CHECK_FALSE(sharp.warning);

  const auto soft = parse_observation("[0.2, 0.3, 0.5]", O);
  CHECK_FALSE(soft.observation.is_sharp());
  CHECK(max_diff(soft.observation.distribution(), {0.2, 0.3, 0.5}) == 0.0);
  CHECK_FALSE(soft.warning);

  const auto rough = parse_observation("[1, 1, 2]", O);
  CHECK(rough.warning);
  CHECK(max_diff(rough.observation.distribution(), {0.25, 0.25, 0.5}) < 1e-16);

  CHECK(parse_observation("[0, 1, 0]", O).observation.is_sharp());

  const Shape two{WireType::make("A", {"a0", "a1"}), WireType::make("B", {"b0", "b1"})};
  CHECK(parse_observation("a1,b0", two).observation.point() == 2);

  for (const char* bad : {"o3", "[0.5, 0.5]", "[1, -1, 1]", "[0, 0, 0]", "[1, 2", "o1,o2"}) {
    CAPTURE(bad);
    try {
      parse_observation(bad, O);
      FAIL("expected InvalidArgument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
  }
}

}  // TEST_SUITE
