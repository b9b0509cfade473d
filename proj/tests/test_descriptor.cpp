#include <doctest.h>

#include "mfr/descriptor.hpp"
#include "mfr/errors.hpp"
#include "support.hpp"

using namespace mfr;

namespace {

ItemValueSet set_of(std::initializer_list<ItemValue> vs) {
  ItemValueSet s;
  for (const ItemValue& v : vs) s.add(v.face_type, v.convexity, v.count);
  return s;
}

constexpr auto kConvex = Convexity::Convex;
constexpr auto kConcave = Convexity::Concave;

}  // namespace

TEST_SUITE("descriptor") {

TEST_CASE("item value sets merge counts per key") {
  ItemValueSet s;
  s.add(FaceType::Cyli, kConcave);
  s.add(FaceType::Cyli, kConcave);
  s.add(FaceType::Plan, kConvex);
  CHECK(s.size() == 2);
  CHECK(s.count(FaceType::Cyli, kConcave) == 2);
  CHECK(s.count(FaceType::Cyli, kConvex) == 0);
  CHECK(to_string(s) == "CYLI|CONCAVE:2 PLAN|CONVEX:1");
  CHECK(to_string(ItemValue{FaceType::Any, kConvex, 3}) == "ANY|CONVEX:3");
}

TEST_CASE("twenty items in canonical order") {
  const auto& items = descriptor_items();
  REQUIRE(items.size() == 20);
  CHECK(items.front().name == "f_facetype");
  CHECK(items.back().name == "ax_interference");
  CHECK(find_item("il_obtuse") != nullptr);
  CHECK(find_item("il_obtuse")->kind == ItemKind::Set);
  CHECK(find_item("f_curvature")->kind == ItemKind::Scalar);
  CHECK(find_item("nope") == nullptr);
  const Descriptor d;
  CHECK_THROWS_AS(item_value(d, "nope"), SchemaError);
}

TEST_CASE("machining conditions must be positive") {
  MachiningConditions c;
  CHECK_NOTHROW(validate(c));
  c.fillet_width_threshold = 0;
  CHECK_THROWS_AS(validate(c), SchemaError);
}

TEST_CASE("counterbore annulus with a breakout") {
  const auto& s = test::fixture("counterbore_breakout");
  const Descriptor d = extract_descriptor(s.model, test::base_face(s, FeatureType::CounterboreHole), {});
  CHECK(d.f_facetype == FaceType::Plan);
  CHECK(d.f_curvature == CurvatureClass::Flat);
  CHECK(d.ol.convexity == set_of({{FaceType::Cyli, kConcave, 2}, {FaceType::Plan, kConvex, 1}}));
  CHECK(d.il.convexity == set_of({{FaceType::Cyli, kConvex, 2}}));
  CHECK(d.il.perpendicular == set_of({{FaceType::Cyli, kConvex, 2}}));
  CHECK(d.ax_coaxial);
}

TEST_CASE("through hole wall") {
  const auto& s = test::fixture("simple_hole_through");
  const Descriptor d = extract_descriptor(s.model, test::base_face(s, FeatureType::SimpleHole), {});
  CHECK(d.f_facetype == FaceType::Cyli);
  CHECK(d.f_curvature == CurvatureClass::Negative);
  // Top and bottom faces, both convex; the axis is parallel to their normals,
  // which the rotational rule reports as perpendicular.
  CHECK(d.ol.convexity == set_of({{FaceType::Plan, kConvex, 2}}));
  CHECK(d.ol.perpendicular == set_of({{FaceType::Plan, kConvex, 2}}));
  CHECK(d.ol.parallel.empty());
  CHECK(d.il.convexity.empty());
  CHECK(d.ax_interference);
  CHECK(d.f_filletmachining == WidthLevel::Longer);  // radius 8 against threshold 6
}

TEST_CASE("slot floor width against the slot threshold") {
  const auto& s = test::fixture("simple_slot");
  const int floor = test::base_face(s, FeatureType::SimpleSlot);
  CHECK(extract_descriptor(s.model, floor, {}).f_facemachining == WidthLevel::Shorter);
  MachiningConditions narrow;
  narrow.slot_width_threshold = 5;
  CHECK(extract_descriptor(s.model, floor, narrow).f_facemachining == WidthLevel::Longer);

  const auto& p = test::fixture("closed_pocket");
  CHECK(extract_descriptor(p.model, test::base_face(p, FeatureType::ClosedPocket), {}).f_facemachining ==
        WidthLevel::Longer);
}

TEST_CASE("fillet width against the fillet threshold") {
  const auto& s = test::fixture("outer_fillet");
  const int fillet = test::base_face(s, FeatureType::OuterFillet);
  const Descriptor d = extract_descriptor(s.model, fillet, {});
  CHECK(d.f_curvature == CurvatureClass::Positive);
  CHECK(d.f_filletmachining == WidthLevel::Shorter);
  CHECK(d.ol.continuity.count(FaceType::Plan, kConvex) == 2);
  MachiningConditions tight;
  tight.fillet_width_threshold = 3;
  CHECK(extract_descriptor(s.model, fillet, tight).f_filletmachining == WidthLevel::Longer);
}

TEST_CASE("pocket floor with an island") {
  const auto& s = test::fixture("closed_island");
  const Descriptor d = extract_descriptor(s.model, test::base_face(s, FeatureType::ClosedIsland), {});
  CHECK(d.ol.convexity == set_of({{FaceType::Plan, kConcave, 4}}));
  CHECK(d.il.convexity == set_of({{FaceType::Plan, kConcave, 4}}));
  CHECK_FALSE(d.ax_interference);
}

TEST_CASE("adjacency records match the loop items") {
  for (const SynthesizedModel& s : test::suite()) {
    CAPTURE(s.name);
    for (const Face& f : s.model.faces()) {
      const Descriptor d = extract_descriptor(s.model, f.id, {});
      int outer = 0, inner = 0;
      for (const AdjacencyRecord& r : d.adjacency) (r.loop == LoopKind::Outer ? outer : inner)++;
      auto total = [](const ItemValueSet& v) {
        int n = 0;
        for (const auto& [k, c] : v.entries()) n += c;
        return n;
      };
      CHECK(total(d.ol.convexity) == outer);
      CHECK(total(d.il.convexity) == inner);
      // Each neighbour lands in exactly one angle bucket.
      CHECK(total(d.ol.parallel) + total(d.ol.perpendicular) + total(d.ol.acute) + total(d.ol.obtuse) == outer);
    }
  }
}

TEST_CASE("text and JSON renderings name every item") {
  const auto& s = test::fixture("countersink_hole");
  const Descriptor d = extract_descriptor(s.model, 1, {});
  const std::string text = descriptor_to_text(d), json = descriptor_to_json(d);
  for (const ItemInfo& i : descriptor_items()) {
    CHECK(text.find(std::string(i.name)) != std::string::npos);
    CHECK(json.find(std::string(i.name)) != std::string::npos);
  }
}

}  // TEST_SUITE
