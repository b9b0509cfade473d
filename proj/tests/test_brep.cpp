#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mfr/brep.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"
#include "mfr/model_builder.hpp"
#include "support.hpp"

using namespace mfr;

TEST_SUITE("brep") {

TEST_CASE("golden cube JSON satisfies Euler's formula and validates") {
  const Model m = load_model(test::data_path("cube.model.json"));
  CHECK(m.vertices().size() == 8);
  CHECK(m.edges().size() == 12);
  CHECK(m.faces().size() == 6);
  const long long euler = static_cast<long long>(m.vertices().size()) - static_cast<long long>(m.edges().size()) +
                          static_cast<long long>(m.faces().size());
  CHECK(euler == 2);
  CHECK(validate_topology(m).empty());
  CHECK(m.bbox_diagonal() == doctest::Approx(10.0 * std::sqrt(3.0)));
  for (const Edge& e : m.edges()) CHECK(m.edge_uses(e.id).size() == 2);
}

TEST_CASE("JSON round trip is lossless") {
  const Model m = test::fixture("counterbore_breakout").model;
  const std::string once = model_to_json(m);
  CHECK(model_to_json(model_from_json(once)) == once);
}

TEST_CASE("removing a face opens the shell") {
  const Model m = load_model(test::data_path("cube.model.json"));
  std::vector<Face> faces(m.faces().begin(), m.faces().end() - 1);
  const Model open("mm", m.vertices(), m.edges(), faces);
  const auto diags = validate_topology(open);
  CHECK_FALSE(diags.empty());
  CHECK(format_diagnostics(diags).find("edge") != std::string::npos);

  std::string text = model_to_json(open);
  CHECK_THROWS_AS(model_from_json(text), TopologyError);
}

TEST_CASE("malformed JSON is a schema error") {
  CHECK_THROWS_AS(model_from_json("{\"schema_version\":1}"), SchemaError);
  CHECK_THROWS_AS(model_from_json("not json"), SchemaError);
  CHECK_THROWS_AS(model_from_json("{\"schema_version\":99,\"vertices\":[],\"edges\":[],\"faces\":[]}"), SchemaError);
}

TEST_CASE("unknown ids are reported") {
  const Model m = load_model(test::data_path("cube.model.json"));
  CHECK_THROWS_AS(m.face(99), UnknownFace);
  CHECK_THROWS_AS(m.edge(99), TopologyError);
}

TEST_CASE("arc geometry matches the circle parameterisation") {
  // Quarter arc of the unit circle from +x to +y about +z.
  const Model m("mm", {{1, {1, 0, 0}}, {2, {0, 1, 0}}}, {{1, CircularArc{{0, 0, 0}, {0, 0, 1}, 1.0}, 1, 2}}, {});
  const Edge& e = m.edge(1);
  CHECK(arc_sweep(m, e) == doctest::Approx(std::numbers::pi / 2));
  const Vec3 mid = edge_point(m, e, 0.5);
  CHECK(mid.x == doctest::Approx(std::sqrt(0.5)));
  CHECK(mid.y == doctest::Approx(std::sqrt(0.5)));
  const Vec3 t0 = edge_tangent(m, e, 0.0);
  CHECK(t0.y == doctest::Approx(1.0));
  // Reversed coedge runs from +y back to +x.
  const Vec3 r0 = coedge_point(m, Coedge{1, true}, 0.0);
  CHECK(r0.y == doctest::Approx(1.0));
  CHECK(coedge_start_vertex(m, Coedge{1, true}) == 2);
}

TEST_CASE("builder merges shared edges between faces") {
  ModelBuilder b;
  const std::vector<Vec3> sq = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  b.add_face(Plane{{0, 0, 0}, {0, 0, -1}}, true, {polygon({sq[0], sq[3], sq[2], sq[1]})});
  b.add_face(Plane{{0, 0, 0}, {0, -1, 0}}, true, {polygon({{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}})});
  const Model m = b.build();
  CHECK(m.vertices().size() == 6);
  CHECK(m.edges().size() == 7);
  int shared = 0;
  for (const Edge& e : m.edges()) shared += m.edge_uses(e.id).size() == 2 ? 1 : 0;
  CHECK(shared == 1);
}

TEST_CASE("segment helpers") {
  const Segment a = arc_seg({1, 0, 0}, {-1, 0, 0}, {0, 0, 0}, {0, 0, 1});
  CHECK(segment_sweep(a) == doctest::Approx(std::numbers::pi));
  const Vec3 p = segment_point(a, 0.5);
  CHECK(p.y == doctest::Approx(1.0));
  const Segment r = reversed(a);
  CHECK(segment_point(r, 0.5).y == doctest::Approx(1.0));
  CHECK(segment_sweep(arc_seg({1, 0, 0}, {1, 0, 0}, {0, 0, 0}, {0, 0, 1})) == doctest::Approx(2 * std::numbers::pi));
  CHECK(segment_sweep(line_seg({0, 0, 0}, {1, 0, 0})) == 0.0);
}

TEST_CASE("every adjacency query on the suite has a mate") {
  for (const SynthesizedModel& s : test::suite()) {
    CAPTURE(s.name);
    for (const Face& f : s.model.faces()) {
      for (const Adjacency& a : adjacent_faces(s.model, f.id, LoopKind::Outer)) {
        CHECK(a.face_id != f.id);
        CHECK(s.model.has_face(a.face_id));
      }
    }
  }
}

TEST_CASE("face type names") {
  CHECK(to_string(FaceType::Cyli) == "CYLI");
  CHECK(face_type_from_string("TORO") == FaceType::Toro);
  CHECK_FALSE(face_type_from_string("BSPL").has_value());
  CHECK(is_rotational(Cone{{0, 0, 0}, {0, 0, 1}, 0.5}));
  CHECK_FALSE(is_rotational(Sphere{{0, 0, 0}, 1}));
}

}  // TEST_SUITE
