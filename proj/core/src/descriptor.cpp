#include "mfr/descriptor.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "mfr/errors.hpp"

namespace mfr {

std::string_view to_string(CurvatureClass c) {
  switch (c) {
    case CurvatureClass::Positive: return "POSITIVE";
    case CurvatureClass::Flat: return "FLAT";
    case CurvatureClass::Negative: return "NEGATIVE";
  }
  return "FLAT";
}

std::string_view to_string(WidthLevel w) { return w == WidthLevel::Longer ? "LONGER" : "SHORTER"; }

std::string to_string(const ItemValue& v) {
  return std::string(to_string(v.face_type)) + "|" + std::string(to_string(v.convexity)) + ":" +
         std::to_string(v.count);
}

void ItemValueSet::add(FaceType t, Convexity c, int n) {
  if (n <= 0) return;
  entries_[{t, c}] += n;
}

int ItemValueSet::count(FaceType t, Convexity c) const {
  const auto it = entries_.find({t, c});
  return it == entries_.end() ? 0 : it->second;
}

std::vector<ItemValue> ItemValueSet::values() const {
  std::vector<ItemValue> out;
  for (const auto& [key, n] : entries_) out.push_back({key.first, key.second, n});
  return out;
}

// Largest counts first, then key order, as in a printed descriptor.
std::string to_string(const ItemValueSet& s) {
  std::vector<ItemValue> vs = s.values();
  std::stable_sort(vs.begin(), vs.end(), [](const ItemValue& a, const ItemValue& b) { return a.count > b.count; });
  std::string out;
  for (const ItemValue& v : vs) {
    if (!out.empty()) out += ' ';
    out += to_string(v);
  }
  return out.empty() ? "{}" : out;
}

void validate(const MachiningConditions& c) {
  if (!(c.slot_width_threshold > 0) || !(c.fillet_width_threshold > 0) || !(c.chamfer_width_threshold > 0)) {
    throw SchemaError("machining-condition thresholds must be positive");
  }
}

// ---------------------------------------------------------------------------

const std::vector<ItemInfo>& descriptor_items() {
  static const std::vector<ItemInfo> items = [] {
    const std::vector<std::string_view> types{"PLAN", "CYLI", "CONI", "SPHE", "TORO"};
    const std::vector<std::string_view> widths{"LONGER", "SHORTER"};
    const std::vector<std::string_view> flags{"TRUE", "FALSE"};
    std::vector<ItemInfo> v{
        {"f_facetype", ItemKind::Scalar, types},
        {"f_curvature", ItemKind::Scalar, {"POSITIVE", "FLAT", "NEGATIVE"}},
        {"f_facemachining", ItemKind::Scalar, widths},
        {"f_filletmachining", ItemKind::Scalar, widths},
        {"f_chamfermachining", ItemKind::Scalar, widths},
    };
    static constexpr std::array<std::string_view, 12> loop_items{
        "ol_convexity", "ol_continuity", "ol_parallel", "ol_perpendicular", "ol_acute", "ol_obtuse",
        "il_convexity", "il_continuity", "il_parallel", "il_perpendicular", "il_acute", "il_obtuse"};
    for (std::string_view name : loop_items) v.push_back({name, ItemKind::Set, {}});
    v.push_back({"ax_parallel", ItemKind::Scalar, flags});
    v.push_back({"ax_coaxial", ItemKind::Scalar, flags});
    v.push_back({"ax_interference", ItemKind::Scalar, flags});
    return v;
  }();
  return items;
}

const ItemInfo* find_item(std::string_view name) {
  for (const ItemInfo& i : descriptor_items()) {
    if (i.name == name) return &i;
  }
  return nullptr;
}

namespace {

const ItemValueSet* loop_bucket(const LoopItems& l, std::string_view rel) {
  if (rel == "convexity") return &l.convexity;
  if (rel == "continuity") return &l.continuity;
  if (rel == "parallel") return &l.parallel;
  if (rel == "perpendicular") return &l.perpendicular;
  if (rel == "acute") return &l.acute;
  if (rel == "obtuse") return &l.obtuse;
  return nullptr;
}

ItemValueSet& angle_bucket(LoopItems& l, AngleClass a) {
  switch (a) {
    case AngleClass::Parallel: return l.parallel;
    case AngleClass::Perpendicular: return l.perpendicular;
    case AngleClass::Acute: return l.acute;
    case AngleClass::Obtuse: return l.obtuse;
  }
  return l.parallel;
}

std::string flag(bool b) { return b ? "TRUE" : "FALSE"; }

}  // namespace

ItemData item_value(const Descriptor& d, std::string_view name) {
  if (name == "f_facetype") return std::string(to_string(d.f_facetype));
  if (name == "f_curvature") return std::string(to_string(d.f_curvature));
  if (name == "f_facemachining") return std::string(to_string(d.f_facemachining));
  if (name == "f_filletmachining") return std::string(to_string(d.f_filletmachining));
  if (name == "f_chamfermachining") return std::string(to_string(d.f_chamfermachining));
  if (name == "ax_parallel") return flag(d.ax_parallel);
  if (name == "ax_coaxial") return flag(d.ax_coaxial);
  if (name == "ax_interference") return flag(d.ax_interference);
  if (name.size() > 3 && (name.substr(0, 3) == "ol_" || name.substr(0, 3) == "il_")) {
    const LoopItems& l = name[0] == 'o' ? d.ol : d.il;
    if (const ItemValueSet* s = loop_bucket(l, name.substr(3))) return *s;
  }
  throw SchemaError("unknown descriptor item '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

Descriptor extract_descriptor(const GeomContext& ctx, int face_id, const MachiningConditions& cond,
                              bool fold_angles) {
  const Model& m = ctx.model();
  const Face& f = m.face(face_id);
  Descriptor d;
  d.face_id = face_id;
  d.f_facetype = face_type_of(f.surface);
  if (d.f_facetype == FaceType::Plan) {
    d.f_curvature = CurvatureClass::Flat;
  } else {
    d.f_curvature = f.sense ? CurvatureClass::Positive : CurvatureClass::Negative;
  }

  const ParallelPair pp = parallel_pair(ctx, face_id);
  d.ax_parallel = pp.found;
  d.pair_width = pp.width;
  d.f_facemachining =
      !pp.found || *pp.width >= cond.slot_width_threshold ? WidthLevel::Longer : WidthLevel::Shorter;
  d.face_width = face_width(ctx, face_id);
  d.f_filletmachining = d.face_width >= cond.fillet_width_threshold ? WidthLevel::Longer : WidthLevel::Shorter;
  d.f_chamfermachining =
      d.face_width >= cond.chamfer_width_threshold ? WidthLevel::Longer : WidthLevel::Shorter;

  const Vec3 v1 = base_vector(ctx, face_id);
  const bool rot_a = is_rotational(f.surface);
  std::vector<int> outer_adj, inner_adj;
  for (LoopKind kind : {LoopKind::Outer, LoopKind::Inner}) {
    LoopItems& items = kind == LoopKind::Outer ? d.ol : d.il;
    for (const Adjacency& a : adjacent_faces(m, face_id, kind)) {
      const Face& g = m.face(a.face_id);
      AdjacencyRecord rec;
      rec.loop = kind;
      rec.face_id = a.face_id;
      rec.edge_id = a.coedge.edge_id;
      rec.face_type = face_type_of(g.surface);
      rec.convexity = convexity(ctx, face_id, a.face_id, a.coedge);
      rec.continuity = continuity(ctx, face_id, a.face_id, a.coedge.edge_id);
      rec.angle = angle_class(v1, base_vector(ctx, a.face_id), ctx.tolerances().angular, fold_angles);
      // An axis lies in its own surface, so against a normal vector the
      // parallel and perpendicular readings trade places.
      if (rot_a != is_rotational(g.surface)) {
        if (rec.angle == AngleClass::Parallel) rec.angle = AngleClass::Perpendicular;
        else if (rec.angle == AngleClass::Perpendicular) rec.angle = AngleClass::Parallel;
      }
      items.convexity.add(rec.face_type, rec.convexity);
      if (rec.continuity == ContinuityClass::Higher) items.continuity.add(rec.face_type, rec.convexity);
      angle_bucket(items, rec.angle).add(rec.face_type, rec.convexity);
      (kind == LoopKind::Outer ? outer_adj : inner_adj).push_back(a.face_id);
      d.adjacency.push_back(rec);
    }
  }
  for (int a : outer_adj) {
    for (int b : inner_adj) {
      if (coaxial(ctx, a, b)) d.ax_coaxial = true;
    }
  }
  d.ax_interference = interference(ctx, face_id);
  return d;
}

Descriptor extract_descriptor(const Model& m, int face_id, const MachiningConditions& cond, bool fold_angles) {
  m.face(face_id);
  const GeomContext ctx(m);
  return extract_descriptor(ctx, face_id, cond, fold_angles);
}

// ---------------------------------------------------------------------------

std::string descriptor_to_json(const Descriptor& d) {
  nlohmann::ordered_json j;
  j["face_id"] = d.face_id;
  for (const ItemInfo& info : descriptor_items()) {
    const ItemData v = item_value(d, info.name);
    if (const auto* s = std::get_if<std::string>(&v)) {
      j[std::string(info.name)] = *s;
    } else {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const ItemValue& iv : std::get<ItemValueSet>(v).values()) {
        arr.push_back({{"face_type", std::string(to_string(iv.face_type))},
                       {"convexity", std::string(to_string(iv.convexity))},
                       {"count", iv.count}});
      }
      j[std::string(info.name)] = arr;
    }
  }
  j["face_width"] = d.face_width;
  j["pair_width"] = d.pair_width ? nlohmann::ordered_json(*d.pair_width) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

std::string descriptor_to_text(const Descriptor& d) {
  std::ostringstream os;
  os << "face " << d.face_id << '\n';
  for (const ItemInfo& info : descriptor_items()) {
    const ItemData v = item_value(d, info.name);
    os << "  " << info.name << std::string(20 - info.name.size(), ' ');
    if (const auto* s = std::get_if<std::string>(&v)) os << *s;
    else os << to_string(std::get<ItemValueSet>(v));
    os << '\n';
  }
  return os.str();
}

}  // namespace mfr
