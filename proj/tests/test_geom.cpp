#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mfr/errors.hpp"
#include "mfr/geom.hpp"
#include "mfr/surface.hpp"
#include "support.hpp"

using namespace mfr;

namespace {

int first_of_type(const Model& m, FaceType t) {
  for (const Face& f : m.faces()) {
    if (face_type_of(f.surface) == t) return f.id;
  }
  return 0;
}

std::vector<Convexity> outer_convexities(const GeomContext& ctx, int face) {
  std::vector<Convexity> out;
  for (const Adjacency& a : adjacent_faces(ctx.model(), face, LoopKind::Outer)) {
    out.push_back(convexity(ctx, face, a.face_id, a.coedge));
  }
  return out;
}

}  // namespace

TEST_SUITE("geom") {

TEST_CASE("every edge of a convex block is convex") {
  const Model m = load_model(test::data_path("cube.model.json"));
  const GeomContext ctx(m);
  for (const Face& f : m.faces()) {
    const auto c = outer_convexities(ctx, f.id);
    CHECK(c.size() == 4);
    for (Convexity x : c) CHECK(x == Convexity::Convex);
  }
}

TEST_CASE("pocket floor meets its walls along concave edges") {
  const auto& s = test::fixture("closed_pocket");
  const GeomContext ctx(s.model);
  const int floor = test::base_face(s, FeatureType::ClosedPocket);
  const auto c = outer_convexities(ctx, floor);
  CHECK(c.size() == 4);
  for (Convexity x : c) CHECK(x == Convexity::Concave);
}

TEST_CASE("hole wall meets the top face along a convex edge") {
  const auto& s = test::fixture("simple_hole_through");
  const GeomContext ctx(s.model);
  const int wall = test::base_face(s, FeatureType::SimpleHole);
  const auto adj = adjacent_faces(s.model, wall, LoopKind::Outer);
  // Top and bottom faces only; the seam is not a neighbour.
  CHECK(adj.size() == 2);
  for (Convexity x : outer_convexities(ctx, wall)) CHECK(x == Convexity::Convex);
}

TEST_CASE("tangent fillets: convex outside, concave inside, both smooth") {
  for (auto [name, feature, expected] : {std::tuple{"outer_fillet", FeatureType::OuterFillet, Convexity::Convex},
                                         std::tuple{"inner_fillet", FeatureType::InnerFillet, Convexity::Concave}}) {
    CAPTURE(name);
    const auto& s = test::fixture(name);
    const GeomContext ctx(s.model);
    const int fillet = test::base_face(s, feature);
    int smooth = 0;
    for (const Adjacency& a : adjacent_faces(s.model, fillet, LoopKind::Outer)) {
      if (continuity(ctx, fillet, a.face_id, a.coedge.edge_id) == ContinuityClass::Higher) {
        ++smooth;
        CHECK(convexity(ctx, fillet, a.face_id, a.coedge) == expected);
      }
    }
    CHECK(smooth == 2);
  }
}

TEST_CASE("convexity of non-neighbours is an error") {
  const Model m = load_model(test::data_path("cube.model.json"));
  const GeomContext ctx(m);
  // Faces 1 (bottom) and 2 (top) share no edge.
  const Coedge c = m.face(1).loops[0].coedges[0];
  CHECK_THROWS_AS(convexity(ctx, 1, 2, c), NotAdjacent);
}

TEST_CASE("angle classes from vector angles") {
  const double tol = 1e-6;
  CHECK(angle_class({1, 0, 0}, {0, 2, 0}, tol) == AngleClass::Perpendicular);
  CHECK(angle_class({1, 0, 0}, {3, 0, 0}, tol) == AngleClass::Parallel);
  CHECK(angle_class({1, 0, 0}, {-1, 0, 0}, tol) == AngleClass::Parallel);
  CHECK(angle_class({1, 0, 0}, {-1, 0, 0}, tol, false) == AngleClass::Obtuse);
  CHECK(angle_class({1, 0, 0}, {1, 1, 0}, tol) == AngleClass::Acute);
  // 135 degrees folds onto 45.
  CHECK(angle_class({1, 0, 0}, {-1, 1, 0}, tol) == AngleClass::Acute);
  CHECK(angle_class({1, 0, 0}, {-1, 1, 0}, tol, false) == AngleClass::Obtuse);
  CHECK_THROWS_AS(angle_class({0, 0, 0}, {1, 0, 0}, tol), ZeroVector);
}

TEST_CASE("counterbore bores share an axis") {
  const auto& s = test::fixture("counterbore_one_cylinder");
  const GeomContext ctx(s.model);
  std::vector<int> cyl;
  for (const Face& f : s.model.faces()) {
    if (face_type_of(f.surface) == FaceType::Cyli) cyl.push_back(f.id);
  }
  REQUIRE(cyl.size() == 2);
  CHECK(coaxial(ctx, cyl[0], cyl[1]));
  const int top = 1;
  CHECK_FALSE(coaxial(ctx, top, cyl[0]));
}

TEST_CASE("face widths follow the surface kind") {
  SUBCASE("cylinder: radius") {
    const auto& s = test::fixture("simple_hole_through");
    const GeomContext ctx(s.model);
    CHECK(face_width(ctx, test::base_face(s, FeatureType::SimpleHole)) == doctest::Approx(8.0));
  }
  SUBCASE("cone: slant length") {
    const auto& s = test::fixture("taper_hole");
    const GeomContext ctx(s.model);
    const int cone = test::base_face(s, FeatureType::TaperHole);
    double zmin = 1e9, zmax = -1e9;
    for (const Coedge& c : s.model.face(cone).loops[0].coedges) {
      const double z = s.model.vertex(coedge_start_vertex(s.model, c)).point.z;
      zmin = std::min(zmin, z);
      zmax = std::max(zmax, z);
    }
    const auto& cs = std::get<Cone>(s.model.face(cone).surface);
    const double dr = (zmax - zmin) * std::tan(cs.half_angle);
    CHECK(face_width(ctx, cone) == doctest::Approx(std::hypot(zmax - zmin, dr)));
  }
  SUBCASE("plane: short side of the enclosing rectangle") {
    const auto& s = test::fixture("simple_slot");
    const GeomContext ctx(s.model);
    CHECK(face_width(ctx, test::base_face(s, FeatureType::SimpleSlot)) == doctest::Approx(10.0));
  }
}

TEST_CASE("minimum-area rectangle of a rotated rectangle") {
  const double a = 0.5236;  // about 30 degrees
  const Vec2 ex{std::cos(a), std::sin(a)}, ey{-std::sin(a), std::cos(a)};
  std::vector<Vec2> pts;
  for (double i : {0.0, 7.0}) {
    for (double j : {0.0, 3.0}) pts.push_back({ex.u * i + ey.u * j + 5, ex.v * i + ey.v * j - 2});
  }
  pts.push_back({ex.u * 3.5 + ey.u * 1.5 + 5, ex.v * 3.5 + ey.v * 1.5 - 2});
  CHECK(min_rect_short_side(pts) == doctest::Approx(3.0));
}

TEST_CASE("parallel wall pair of a slot floor") {
  const auto& s = test::fixture("simple_slot");
  const GeomContext ctx(s.model);
  const ParallelPair p = parallel_pair(ctx, test::base_face(s, FeatureType::SimpleSlot));
  CHECK(p.found);
  REQUIRE(p.width.has_value());
  CHECK(*p.width == doctest::Approx(10.0));
}

TEST_CASE("interference along the outward normal") {
  const Model cube = load_model(test::data_path("cube.model.json"));
  const GeomContext cctx(cube);
  for (const Face& f : cube.faces()) CHECK_FALSE(interference(cctx, f.id));

  const auto& hole = test::fixture("simple_hole_through");
  const GeomContext hctx(hole.model);
  CHECK(interference(hctx, test::base_face(hole, FeatureType::SimpleHole)));

  const auto& pocket = test::fixture("closed_pocket");
  const GeomContext pctx(pocket.model);
  CHECK_FALSE(interference(pctx, test::base_face(pocket, FeatureType::ClosedPocket)));
}

TEST_CASE("point containment") {
  const auto& s = test::fixture("simple_hole_through");
  const GeomContext ctx(s.model);
  CHECK(ctx.point_in_solid({10, 10, 20}, 0));
  CHECK_FALSE(ctx.point_in_solid({50, 40, 20}, 0));  // on the hole axis
  CHECK_FALSE(ctx.point_in_solid({150, 40, 20}, 0));
}

TEST_CASE("face centers lie inside their faces") {
  for (const SynthesizedModel& s : test::suite()) {
    CAPTURE(s.name);
    const GeomContext ctx(s.model);
    for (const Face& f : s.model.faces()) {
      CAPTURE(f.id);
      const Vec3 c = ctx.face_center(f.id);
      CHECK(distance_to_surface(f.surface, c) < 1e-6);
      CHECK(ctx.point_in_face(f.id, c));
    }
  }
}

TEST_CASE("ray intersections agree with closed forms") {
  const Cylinder cyl{{0, 0, 0}, {0, 0, 1}, 2.0};
  const auto t = intersect_ray(cyl, {-5, 0, 1}, {1, 0, 0}, 0, 100);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(3.0));
  CHECK(t[1] == doctest::Approx(7.0));

  const Sphere sph{{0, 0, 0}, 1.0};
  const auto ts = intersect_ray(sph, {0, 0, -3}, {0, 0, 1}, 0, 100);
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == doctest::Approx(2.0));

  // 45-degree cone opening along +z from the origin meets z = 2 at radius 2.
  const Cone cone{{0, 0, 0}, {0, 0, 1}, std::numbers::pi / 4};
  const auto tc = intersect_ray(cone, {-5, 0, 2}, {1, 0, 0}, 0, 100);
  REQUIRE(tc.size() == 2);
  CHECK(tc[0] == doctest::Approx(3.0));
  CHECK(tc[1] == doctest::Approx(7.0));

  const Torus tor{{0, 0, 0}, {0, 0, 1}, 5.0, 1.0};
  const auto tt = intersect_ray(tor, {-10, 0, 0}, {1, 0, 0}, 0, 100);
  REQUIRE(tt.size() == 4);
  CHECK(tt[0] == doctest::Approx(4.0));
  CHECK(tt[3] == doctest::Approx(16.0));

  const Plane pl{{0, 0, 3}, {0, 0, 1}};
  const auto tp = intersect_ray(pl, {0, 0, 0}, {0, 0, 1}, 0, 100);
  REQUIRE(tp.size() == 1);
  CHECK(tp[0] == doctest::Approx(3.0));
}

TEST_CASE("surface parameterisation inverts") {
  const std::vector<SurfaceGeometry> surfaces = {Cylinder{{1, 2, 3}, normalized({1, 1, 0}), 4.0},
                                                 Cone{{0, 0, 0}, {0, 0, 1}, 0.4},
                                                 Torus{{0, 0, 0}, {0, 1, 0}, 6.0, 2.0},
                                                 Sphere{{1, 1, 1}, 3.0}};
  for (const SurfaceGeometry& s : surfaces) {
    for (const Vec2 uv : {Vec2{0.3, 1.2}, Vec2{2.5, 0.4}}) {
      const Vec3 p = from_param(s, uv);
      CHECK(distance_to_surface(s, p) < 1e-9);
      CHECK(distance(from_param(s, to_param(s, p)), p) < 1e-9);
    }
  }
  CHECK(first_of_type(test::fixture("outer_fillet").model, FaceType::Cyli) != 0);
}

}  // TEST_SUITE
