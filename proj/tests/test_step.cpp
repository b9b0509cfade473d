#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <regex>

#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"
#include "mfr/recognizer.hpp"
#include "mfr/step.hpp"
#include "support.hpp"

using namespace mfr;

namespace {

std::string wrap(const std::string& data) {
  return "ISO-10303-21;\nHEADER;\nFILE_DESCRIPTION((''),'2;1');\nENDSEC;\nDATA;\n" + data +
         "ENDSEC;\nEND-ISO-10303-21;\n";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string pt(const Vec3& p) { return "(" + num(p.x) + "," + num(p.y) + "," + num(p.z) + ")"; }

/// Id-free description of a model: per face its surface and the cyclic
/// sequence of loop corner points, started at the smallest point.
std::vector<std::string> canonical(const Model& m) {
  std::vector<std::string> out;
  for (const Face& f : m.faces()) {
    std::string s = std::to_string(f.surface.index()) + (f.sense ? "+" : "-");
    if (const auto* p = std::get_if<Plane>(&f.surface)) s += pt(p->normal) + num(dot(p->normal, p->origin));
    for (const Loop& l : f.loops) {
      std::vector<std::string> corners;
      for (const Coedge& c : l.coedges) corners.push_back(pt(m.vertex(coedge_start_vertex(m, c)).point));
      std::rotate(corners.begin(), std::min_element(corners.begin(), corners.end()), corners.end());
      s += std::string(" ") + std::string(to_string(l.kind)) + ":";
      for (const std::string& c : corners) s += c;
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("step") {

TEST_CASE("single point entity") {
  const StepFile f = parse_step(wrap("#1=CARTESIAN_POINT('',(0.,0.,0.));\n"));
  REQUIRE(f.entities.size() == 1);
  const StepEntity& e = f.entities.at(1);
  CHECK(e.keyword == "CARTESIAN_POINT");
  REQUIRE(e.args.size() == 2);
  const auto& coords = std::get<StepList>(e.args[1].v);
  CHECK(coords.items.size() == 3);
}

TEST_CASE("missing end marker is a syntax error") {
  const std::string text = "ISO-10303-21;\nHEADER;\nENDSEC;\nDATA;\n#1=CARTESIAN_POINT('',(0.,0.,0.));\nENDSEC;\n";
  CHECK_THROWS_AS(parse_step(text), StepSyntaxError);
}

TEST_CASE("missing magic line is a syntax error") {
  CHECK_THROWS_AS(parse_step("HEADER;\nENDSEC;\nDATA;\nENDSEC;\nEND-ISO-10303-21;\n"), StepSyntaxError);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = wrap("#1=CARTESIAN_POINT('',(0.,0.,0.));\n#2=DIRECTION('',(1.,0.,0.)\n");
  try {
    parse_step(text);
    FAIL("expected StepSyntaxError");
  } catch (const StepSyntaxError& e) {
    // The record opened on line 7 is still open when ENDSEC arrives.
    CHECK(e.line() == 8);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("lexical forms: escapes, enums, unset, derived, typed and complex") {
  const StepFile f = parse_step(wrap(
      "/* comment */\n#5=PRODUCT('it''s','x',$,*);\n#6=MEASURE(LENGTH_MEASURE(2.5),.T.,-3,1.E-3);\n"
      "#7=(LENGTH_UNIT()NAMED_UNIT(*)SI_UNIT(.MILLI.,.METRE.));\n"));
  const StepEntity& p = f.entities.at(5);
  CHECK(std::get<std::string>(p.args[0].v) == "it's");
  CHECK(std::holds_alternative<StepUnset>(p.args[2].v));
  CHECK(std::holds_alternative<StepDerived>(p.args[3].v));
  const StepEntity& m = f.entities.at(6);
  const auto& typed = std::get<StepList>(m.args[0].v);
  CHECK(typed.keyword == "LENGTH_MEASURE");
  CHECK(std::get<double>(typed.items[0].v) == 2.5);
  CHECK(std::get<StepEnum>(m.args[1].v).name == "T");
  CHECK(std::get<long long>(m.args[2].v) == -3);
  CHECK(std::get<double>(m.args[3].v) == doctest::Approx(1e-3));
  const StepEntity& c = f.entities.at(7);
  CHECK(c.records.size() == 3);
  CHECK(c.keyword == "LENGTH_UNIT");
}

TEST_CASE("dangling references are reported") {
  CHECK_THROWS_AS(parse_step(wrap("#1=VERTEX_POINT('',#2);\n")), DanglingReference);
}

TEST_CASE("duplicate instance ids are rejected") {
  CHECK_THROWS_AS(parse_step(wrap("#1=DIRECTION('',(1.,0.,0.));\n#1=DIRECTION('',(0.,1.,0.));\n")), StepSyntaxError);
}

TEST_CASE("golden cube has six faces") {
  const StepFile f = read_step(test::data_path("cube.step"));
  const auto faces = std::count_if(f.entities.begin(), f.entities.end(),
                                   [](const auto& kv) { return kv.second.keyword == "ADVANCED_FACE"; });
  CHECK(faces == 6);
}

TEST_CASE("golden cube maps onto the hand-built JSON cube") {
  const StepImport imp = import_step(test::data_path("cube.step"));
  const Model json = load_model(test::data_path("cube.model.json"));
  CHECK(validate_topology(imp.model).empty());
  CHECK(canonical(imp.model) == canonical(json));
  // Context entities outside the solid are ignored with warnings.
  CHECK_FALSE(imp.diagnostics.empty());
  for (const std::string& d : imp.diagnostics) CHECK(d.find("ignored") != std::string::npos);
}

TEST_CASE("unsupported surface reachable from the solid names its keyword") {
  std::string text = read_text_file(test::data_path("cube.step"));
  text = std::regex_replace(text, std::regex(R"(#156=PLANE\('',#166\);)"),
                            "#156=B_SPLINE_SURFACE('',1,1,(),.UNSPECIFIED.,.F.,.F.,.F.);");
  try {
    step_to_model(parse_step(text));
    FAIL("expected UnsupportedEntity");
  } catch (const UnsupportedEntity& e) {
    CHECK(std::string(e.what()).find("B_SPLINE_SURFACE") != std::string::npos);
  }
}

TEST_CASE("missing outer bound promotes the largest loop") {
  std::string text = read_text_file(test::data_path("counterbore.step"));
  // Turn every outer bound into a plain bound.
  text = std::regex_replace(text, std::regex("FACE_OUTER_BOUND"), "FACE_BOUND");
  const StepImport imp = step_to_model(parse_step(text));
  const Model json = load_model(test::data_path("counterbore.model.json"));
  CHECK(canonical(imp.model) == canonical(json));
  const auto promoted = std::count_if(imp.diagnostics.begin(), imp.diagnostics.end(),
                                      [](const std::string& d) { return d.find("FACE_OUTER_BOUND") != std::string::npos; });
  CHECK(promoted == static_cast<long>(json.faces().size()));
}

TEST_CASE("broken topology is a topology error") {
  std::string text = read_text_file(test::data_path("cube.step"));
  text = std::regex_replace(text, std::regex(R"(#180=CLOSED_SHELL\('',\(#171,)"), "#180=CLOSED_SHELL('',(");
  CHECK_THROWS_AS(step_to_model(parse_step(text)), TopologyError);
}

TEST_CASE("closed shell without a solid is a valid root") {
  std::string text = read_text_file(test::data_path("cube.step"));
  text = std::regex_replace(text, std::regex(R"(#181=MANIFOLD_SOLID_BREP\('cube',#180\);)"), "");
  CHECK(step_to_model(parse_step(text)).model.faces().size() == 6);
}

TEST_CASE("declaration order does not matter") {
  const std::string text = read_text_file(test::data_path("cube.step"));
  const auto data = text.find("DATA;\n") + 6, end = text.find("ENDSEC;", data);
  std::vector<std::string> lines;
  std::string body = text.substr(data, end - data), line;
  for (char c : body) {
    line += c;
    if (c == '\n') {
      lines.push_back(line);
      line.clear();
    }
  }
  std::reverse(lines.begin(), lines.end());
  std::string shuffled = text.substr(0, data);
  for (const std::string& l : lines) shuffled += l;
  shuffled += text.substr(end);
  CHECK(model_to_json(step_to_model(parse_step(shuffled)).model) ==
        model_to_json(step_to_model(parse_step(text)).model));
}

TEST_CASE("writer output round-trips every suite model within 1e-9") {
  for (const SynthesizedModel& s : test::suite()) {
    CAPTURE(s.name);
    const std::string text = model_to_step(s.model, s.name);
    const Model back = step_to_model(parse_step(text)).model;
    REQUIRE(back.faces().size() == s.model.faces().size());
    REQUIRE(back.vertices().size() == s.model.vertices().size());
    double worst = 0;
    for (std::size_t i = 0; i < back.vertices().size(); ++i) {
      worst = std::max(worst, distance(back.vertices()[i].point, s.model.vertices()[i].point));
    }
    CHECK(worst <= 1e-9);
    CHECK(canonical(back) == canonical(s.model));
  }
}

TEST_CASE("writer reals always carry a decimal point") {
  const std::string text = model_to_step(test::fixture("counterdrilled_hole").model);
  // A bare integer or exponent-only number directly after '(' or ','; refs
  // are excluded because '#' precedes their digits.
  const std::regex bare(R"([(,]-?\d+(E[-+]?\d+)?[,)])");
  CHECK_FALSE(std::regex_search(text, bare));
  CHECK(text.find("0.,") != std::string::npos);
}

TEST_CASE("golden counterbore recognizes like its JSON twin") {
  const Model a = load_model(test::data_path("counterbore.model.json"));
  const Model b = import_step(test::data_path("counterbore.step")).model;
  const auto ra = recognize(a, default_library(), {}, {});
  const auto rb = recognize(b, default_library(), {}, {});
  CHECK(result_to_json(ra) == result_to_json(rb));
}

}  // TEST_SUITE
