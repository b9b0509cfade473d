#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"
#include "synth_internal.hpp"

namespace mfr {

using namespace synth;

std::string_view to_string(HoleRepresentation r) {
  return r == HoleRepresentation::OneCylinder ? "one_cylinder" : "two_half_cylinders";
}

namespace {

constexpr double kMargin = 1.0;

bool inside(const Box2& outer, const Box2& in) {
  return in.x0 >= outer.x0 + kMargin && in.y0 >= outer.y0 + kMargin && in.x1 <= outer.x1 - kMargin &&
         in.y1 <= outer.y1 - kMargin;
}

Box2 grown(const Box2& b) { return {b.x0 - kMargin, b.y0 - kMargin, b.x1 + kMargin, b.y1 + kMargin}; }

bool inside_disk(double radius, const Box2& b) {
  const double lim = radius - kMargin;
  for (double x : {b.x0, b.x1}) {
    for (double y : {b.y0, b.y1}) {
      if (std::hypot(x, y) > lim) return false;
    }
  }
  return true;
}

std::string describe(const FeatureSpec& f) {
  return std::string(to_string(f.feature)) + " at (" + std::to_string(f.x) + ", " + std::to_string(f.y) + ")";
}

void add_truth(Truth& t, const Cut& cut, int first_id) {
  for (const TruthRecipe& r : cut.truth) {
    TruthFeature tf;
    tf.feature = r.feature;
    for (int i : r.base) tf.base_faces.push_back(first_id + i);
    for (int i : r.members) tf.members.push_back(first_id + i);
    std::sort(tf.base_faces.begin(), tf.base_faces.end());
    std::sort(tf.members.begin(), tf.members.end());
    tf.base_face = tf.base_faces.front();
    t.features.push_back(std::move(tf));
  }
}

}  // namespace

SynthesizedModel build_part(const PartSpec& part, const std::string& name) {
  const bool rot = std::holds_alternative<RotationalStock>(part.stock);
  std::vector<FeatureSpec> edge, interior;
  for (const FeatureSpec& f : part.features) (is_boundary_feature(f, rot) ? edge : interior).push_back(f);
  Frame fr = rot ? rotational_frame(std::get<RotationalStock>(part.stock), edge)
                 : cuboid_frame(std::get<CuboidStock>(part.stock), edge);

  const Host host{fr.top_z, 0};
  std::vector<Cut> cuts;
  std::vector<std::size_t> piece_of;
  std::vector<Box2> used = fr.reserved;
  for (const FeatureSpec& spec : interior) {
    Cut cut = interior_cut(spec, host);
    std::size_t piece = fr.top.size();
    for (std::size_t i = 0; i < fr.top.size(); ++i) {
      const bool fits = rot ? inside_disk(fr.disk_radius, cut.footprint) : inside(fr.top[i].region, cut.footprint);
      if (fits) piece = i;
    }
    if (piece == fr.top.size()) throw PlacementError(describe(spec) + " does not fit on the top face");
    for (const Box2& b : used) {
      if (grown(b).overlaps(cut.footprint)) throw PlacementError(describe(spec) + " overlaps another feature");
    }
    used.push_back(cut.footprint);
    piece_of.push_back(piece);
    cuts.push_back(std::move(cut));
  }

  ModelBuilder b;
  for (std::size_t i = 0; i < fr.top.size(); ++i) {
    std::vector<LoopSegs> loops{fr.top[i].outline};
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      if (piece_of[k] == i) loops.insert(loops.end(), cuts[k].top_loops.begin(), cuts[k].top_loops.end());
    }
    const FaceRecipe f = plane_face(kZ, loops);
    b.add_face(f.surface, f.sense, f.loops);
  }
  {
    std::vector<LoopSegs> loops{fr.bottom};
    loops.insert(loops.end(), fr.cut.bottom_loops.begin(), fr.cut.bottom_loops.end());
    for (const Cut& c : cuts) loops.insert(loops.end(), c.bottom_loops.begin(), c.bottom_loops.end());
    const FaceRecipe f = plane_face(-kZ, loops);
    b.add_face(f.surface, f.sense, f.loops);
  }
  for (const FaceRecipe& f : fr.sides) b.add_face(f.surface, f.sense, f.loops);

  SynthesizedModel out;
  out.name = name;
  out.part = part;
  auto add_cut = [&](const Cut& cut) {
    const int first = b.face_count() + 1;
    for (const FaceRecipe& f : cut.faces) b.add_face(f.surface, f.sense, f.loops);
    add_truth(out.truth, cut, first);
  };
  add_cut(fr.cut);
  for (const Cut& c : cuts) add_cut(c);

  out.model = b.build("mm");
  const std::vector<Diagnostic> diags = validate_topology(out.model);
  if (!diags.empty()) throw TopologyError("generated part '" + name + "' is invalid:\n" + format_diagnostics(diags));
  for (int id = 1; id <= b.face_count(); ++id) out.truth.face_ids.push_back(id);
  return out;
}

Model make_stock(const StockSpec& stock) { return build_part({stock, {}}, "stock").model; }

SynthesizedModel apply_feature(const SynthesizedModel& base, const FeatureSpec& spec) {
  PartSpec p = base.part;
  p.features.push_back(spec);
  return build_part(p, base.name);
}

SynthesizedModel apply_feature(const Model& stock, const FeatureSpec& spec) {
  // Only bare stock produced by make_stock can be recovered as a part.
  double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
  for (const Vertex& v : stock.vertices()) {
    const double c[3] = {v.point.x, v.point.y, v.point.z};
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
  }
  const auto& faces = stock.faces();
  const bool all_planar = std::all_of(faces.begin(), faces.end(),
                                      [](const Face& f) { return std::holds_alternative<Plane>(f.surface); });
  const double tol = 1e-9;
  StockSpec s;
  if (faces.size() == 6 && all_planar && std::abs(lo[0]) < tol && std::abs(lo[1]) < tol && std::abs(lo[2]) < tol) {
    s = CuboidStock{hi[0], hi[1], hi[2]};
  } else if ((faces.size() == 3 || faces.size() == 4) && std::abs(lo[2]) < tol) {
    const auto wall = std::find_if(faces.begin(), faces.end(),
                                   [](const Face& f) { return std::holds_alternative<Cylinder>(f.surface); });
    if (wall == faces.end()) throw PlacementError("model is not a stock produced by the generator");
    const auto& cyl = std::get<Cylinder>(wall->surface);
    if (norm(cross(cyl.axis_dir, kZ)) > tol || std::hypot(cyl.axis_origin.x, cyl.axis_origin.y) > tol) {
      throw PlacementError("model is not a stock produced by the generator");
    }
    s = RotationalStock{cyl.radius, hi[2], faces.size() == 4};
  } else {
    throw PlacementError("model is not a stock produced by the generator");
  }
  return build_part({s, {spec}}, "part");
}

PartSpec default_part(FeatureType f) {
  const CuboidStock block;
  FeatureSpec spec;
  spec.feature = f;
  spec.x = block.w / 2;
  spec.y = block.l / 2;
  return {block, {spec}};
}

namespace {

FeatureSpec feat(FeatureType f, double x, double y, std::map<std::string, double> dims = {},
                 HoleRepresentation rep = HoleRepresentation::OneCylinder, std::string variant = {}) {
  FeatureSpec s;
  s.feature = f;
  s.x = x;
  s.y = y;
  s.dims = std::move(dims);
  s.representation = rep;
  s.variant = std::move(variant);
  return s;
}

}  // namespace

std::vector<SynthesizedModel> standard_suite() {
  using F = FeatureType;
  constexpr auto one = HoleRepresentation::OneCylinder;
  constexpr auto two = HoleRepresentation::TwoHalfCylinders;
  const CuboidStock block;
  const RotationalStock bar;
  RotationalStock split_bar;
  split_bar.split_wall = true;

  struct Entry {
    std::string name;
    PartSpec part;
    std::set<FeatureType> pinned;
  };
  const std::vector<Entry> entries{
      {"counterbore_breakout", {block, {feat(F::CounterboreHole, 0, 40, {}, two, "breakout")}}, {}},
      {"counterbore_one_cylinder", {block, {feat(F::CounterboreHole, 50, 40)}}, {}},
      {"counterbore_two_half", {block, {feat(F::CounterboreHole, 50, 40, {}, two)}}, {}},
      {"counterdrilled_hole", {block, {feat(F::CounterdrilledHole, 50, 40)}}, {}},
      {"countersink_hole", {block, {feat(F::CountersinkHole, 50, 40)}}, {}},
      {"simple_hole_one_cylinder", {block, {feat(F::SimpleHole, 50, 40, {{"depth", 20}}, one)}}, {}},
      {"simple_hole_two_half", {block, {feat(F::SimpleHole, 50, 40, {{"depth", 20}}, two)}}, {}},
      {"simple_hole_through", {block, {feat(F::SimpleHole, 50, 40)}}, {}},
      {"taper_hole", {block, {feat(F::TaperHole, 50, 40)}}, {}},
      {"simple_slot", {block, {feat(F::SimpleSlot, 50, 40)}}, {}},
      {"floorless_slot", {block, {feat(F::FloorlessSlot, 0, 40)}}, {}},
      {"closed_pocket", {block, {feat(F::ClosedPocket, 50, 40)}}, {}},
      {"opened_pocket", {block, {feat(F::OpenedPocket, 50, 40)}}, {}},
      {"floorless_pocket", {block, {feat(F::FloorlessPocket, 50, 40)}}, {}},
      {"closed_island", {block, {feat(F::ClosedIsland, 50, 40)}}, {}},
      {"opened_island", {block, {feat(F::OpenedIsland, 50, 40)}}, {}},
      {"inner_fillet", {block, {feat(F::InnerFillet, 50, 40)}}, {}},
      {"outer_fillet", {block, {feat(F::OuterFillet, 0, 0)}}, {}},
      {"inner_chamfer", {block, {feat(F::InnerChamfer, 50, 40)}}, {}},
      {"outer_chamfer", {block, {feat(F::OuterChamfer, 0, 0)}}, {}},
      {"rotational_hole_chamfer", {bar, {feat(F::SimpleHole, 0, 0), feat(F::OuterChamfer, 0, 0)}}, {}},
      {"rotational_counterbore_fillet", {bar, {feat(F::CounterboreHole, 0, 0), feat(F::OuterFillet, 0, 0)}}, {}},
      {"rotational_split_countersink", {split_bar, {feat(F::CountersinkHole, 0, 0, {}, two)}}, {}},
      {"multi_feature_block",
       {block,
        {feat(F::SimpleHole, 15, 15, {{"radius", 7}, {"depth", 20}}), feat(F::CountersinkHole, 45, 15),
         feat(F::SimpleSlot, 80, 15, {{"length", 24}}), feat(F::InnerFillet, 30, 55),
         feat(F::CounterboreHole, 80, 55, {}, two)}},
       {}},
      {"pocket_floor_hole", {block, {feat(F::ClosedPocket, 50, 40, {{"hole_radius", 7}})}}, {}},
      {"outer_fillet_with_pocket", {block, {feat(F::OuterFillet, 0, 0), feat(F::ClosedPocket, 50, 45)}}, {}},
      {"steep_frustum_passage",
       {CuboidStock{100, 80, 10}, {feat(F::FloorlessPocket, 50, 40, {}, one, "frustum")}},
       {F::OpenedPocket}},
      {"merged_slot_pocket_floor", {block, {feat(F::ClosedPocket, 40, 40, {}, one, "merged_slot")}}, {F::SimpleSlot}},
  };

  std::vector<SynthesizedModel> out;
  for (const Entry& e : entries) {
    SynthesizedModel m = build_part(e.part, e.name);
    m.pinned_failure = !e.pinned.empty();
    m.expected_labels = e.pinned;
    out.push_back(std::move(m));
  }
  return out;
}

void write_suite(const std::vector<SynthesizedModel>& suite, const std::filesystem::path& dir) {
  nlohmann::json manifest = nlohmann::json::array();
  for (const SynthesizedModel& m : suite) {
    const std::string model_file = m.name + ".model.json";
    const std::string truth_file = m.name + ".truth.json";
    save_model(m.model, dir / model_file);
    write_text_file(dir / truth_file, truth_to_json(m.truth));
    nlohmann::json entry{{"name", m.name},
                         {"model", model_file},
                         {"truth", truth_file},
                         {"faces", m.model.faces().size()},
                         {"pinned_failure", m.pinned_failure}};
    if (m.pinned_failure) {
      nlohmann::json labels = nlohmann::json::array();
      for (FeatureType f : m.expected_labels) labels.push_back(std::string(to_string(f)));
      entry["expected_labels"] = labels;
    }
    manifest.push_back(entry);
  }
  write_text_file(dir / "manifest.json", manifest.dump(2));
}

}  // namespace mfr
