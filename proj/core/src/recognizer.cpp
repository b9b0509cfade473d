#include "mfr/recognizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "mfr/errors.hpp"

namespace mfr {

using nlohmann::json;

const Descriptor& DescriptorCache::get(int face_id, bool fold) const {
  const auto& src = fold || unfolded.empty() ? folded : unfolded;
  const auto it = src.find(face_id);
  if (it == src.end()) throw UnknownFace("no descriptor for face " + std::to_string(face_id));
  return it->second;
}

DescriptorCache extract_all(const GeomContext& ctx, const TemplateLibrary& lib, const MachiningConditions& cond) {
  validate(cond);
  const bool need_unfolded = std::any_of(lib.templates.begin(), lib.templates.end(),
                                         [](const FeatureTemplate& t) { return !t.fold_angles; });
  DescriptorCache cache;
  for (const Face& f : ctx.model().faces()) {
    cache.folded.emplace(f.id, extract_descriptor(ctx, f.id, cond, true));
    if (need_unfolded) cache.unfolded.emplace(f.id, extract_descriptor(ctx, f.id, cond, false));
  }
  return cache;
}

namespace {

const FeatureTemplate& find_template(const TemplateLibrary& lib, FeatureType f, const std::string& variant) {
  for (const FeatureTemplate& t : lib.templates) {
    if (t.feature == f && t.variant_id == variant) return t;
  }
  throw SchemaError("no template " + std::string(to_string(f)) + "/" + variant);
}

bool same_surface(const GeomContext& ctx, const Face& a, const Face& b) {
  if (a.surface.index() != b.surface.index() || a.sense != b.sense) return false;
  const double lt = ctx.length_tol();
  const double at = ctx.tolerances().angular;
  if (const auto* pa = std::get_if<Plane>(&a.surface)) {
    const auto& pb = std::get<Plane>(b.surface);
    return angle_between(pa->normal, pb.normal) <= at && std::fabs(dot(pb.origin - pa->origin, normalized(pa->normal))) <= lt;
  }
  if (const auto* sa = std::get_if<Sphere>(&a.surface)) {
    const auto& sb = std::get<Sphere>(b.surface);
    return distance(sa->center, sb.center) <= lt && std::fabs(sa->radius - sb.radius) <= lt;
  }
  if (!coaxial(ctx, a.id, b.id)) return false;
  if (const auto* ca = std::get_if<Cylinder>(&a.surface)) {
    return std::fabs(ca->radius - std::get<Cylinder>(b.surface).radius) <= lt;
  }
  if (const auto* ca = std::get_if<Cone>(&a.surface)) {
    const auto& cb = std::get<Cone>(b.surface);
    return distance(ca->apex, cb.apex) <= lt && std::fabs(ca->half_angle - cb.half_angle) <= at &&
           dot(ca->axis_dir, cb.axis_dir) > 0;
  }
  const auto& ta = std::get<Torus>(a.surface);
  const auto& tb = std::get<Torus>(b.surface);
  return distance(ta.center, tb.center) <= lt && std::fabs(ta.major_radius - tb.major_radius) <= lt &&
         std::fabs(ta.minor_radius - tb.minor_radius) <= lt;
}

std::map<std::string, double> instance_params(const Model& m, FeatureType f, const Descriptor& base,
                                              const std::vector<int>& members) {
  std::map<std::string, double> p;
  std::vector<double> radii;
  for (int id : members) {
    if (const auto* c = std::get_if<Cylinder>(&m.face(id).surface)) radii.push_back(c->radius);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(), [](double x, double y) { return std::fabs(x - y) < 1e-9; }),
              radii.end());
  if (is_hole_family(f) || is_composite_hole(f)) {
    if (!radii.empty()) p["radius"] = radii.front();
    if (radii.size() > 1) p["outer_radius"] = radii.back();
  } else if (f == FeatureType::InnerFillet || f == FeatureType::OuterFillet) {
    p["radius"] = base.face_width;
  } else if (f == FeatureType::InnerChamfer || f == FeatureType::OuterChamfer) {
    p["width"] = base.face_width;
  } else if (base.pair_width) {
    p["width"] = *base.pair_width;
  }
  return p;
}

}  // namespace

Candidates score_faces(const TemplateLibrary& lib, const DescriptorCache& cache, const RecognitionConfig& cfg) {
  validate(cfg);
  Candidates out;
  for (const auto& [face_id, folded] : cache.folded) {
    (void)folded;
    std::vector<LabelScore> labels;
    for (const FeatureTemplate& t : lib.templates) {
      const SimilarityScore s = descriptor_similarity(t, cache.get(face_id, t.fold_angles));
      auto it = std::find_if(labels.begin(), labels.end(), [&](const LabelScore& l) { return l.feature == t.feature; });
      if (it != labels.end() && it->r >= s.r) continue;
      LabelScore ls{t.feature, t.variant_id, s.r, {}};
      for (const auto& [name, res] : s.per_item) ls.scores[name] = res.score.s;
      if (it != labels.end()) *it = ls;
      else labels.push_back(ls);
    }
    std::vector<LabelScore> passing;
    for (const LabelScore& l : labels) {
      if (l.r >= cfg.threshold) passing.push_back(l);
    }
    out.by_face.emplace(face_id, std::move(passing));
  }
  return out;
}

std::set<int> witness_members(const Descriptor& d, const FeatureTemplate& tmpl) {
  std::set<int> out{d.face_id};
  for (const auto& [name, item] : tmpl.items) {
    if (name.size() < 4 || (name[0] != 'o' && name[0] != 'i') || name.substr(3) == "continuity") continue;
    const LoopKind kind = name[0] == 'o' ? LoopKind::Outer : LoopKind::Inner;
    const std::string rel = name.substr(3);
    std::string upper_rel = rel;
    std::transform(upper_rel.begin(), upper_rel.end(), upper_rel.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    std::vector<ItemValue> entries;
    for (const auto* v : {&item.minimum, &item.equal}) {
      if (*v) {
        if (const auto* l = std::get_if<std::vector<ItemValue>>(&**v)) entries.insert(entries.end(), l->begin(), l->end());
      }
    }
    for (const ItemValue& e : entries) {
      if (e.count <= 0 || e.face_type == FaceType::Plan) continue;
      for (const AdjacencyRecord& a : d.adjacency) {
        if (a.loop != kind || a.convexity != e.convexity) continue;
        if (e.face_type != FaceType::Any && e.face_type != a.face_type) continue;
        if (rel != "convexity" && to_string(a.angle) != upper_rel) continue;
        out.insert(a.face_id);
      }
    }
  }
  return out;
}

std::vector<FaceLabel> apply_priority(const TemplateLibrary& lib, const DescriptorCache& cache,
                                      const Candidates& cand) {
  std::map<int, std::vector<Suppression>> suppress;
  for (const auto& [face_id, labels] : cand.by_face) {
    for (const LabelScore& l : labels) {
      if (!is_composite_hole(l.feature)) continue;
      const FeatureTemplate& t = find_template(lib, l.feature, l.variant);
      const std::string reason =
          "claimed by " + std::string(to_string(l.feature)) + " at base face " + std::to_string(face_id);
      for (int member : witness_members(cache.get(face_id, t.fold_angles), t)) {
        const auto it = cand.by_face.find(member);
        if (it == cand.by_face.end()) continue;
        for (const LabelScore& other : it->second) {
          if (is_hole_family(other.feature)) suppress[member].push_back({other.feature, reason});
        }
      }
    }
  }
  std::vector<FaceLabel> out;
  for (const auto& [face_id, labels] : cand.by_face) {
    FaceLabel fl;
    fl.face_id = face_id;
    auto& sup = suppress[face_id];
    for (const LabelScore& l : labels) {
      const bool dropped = std::any_of(sup.begin(), sup.end(), [&](const Suppression& s) { return s.feature == l.feature; });
      if (!dropped) fl.labels.push_back(l);
    }
    // One record per suppressed feature, first reason wins.
    for (const Suppression& s : sup) {
      if (std::none_of(fl.suppressed.begin(), fl.suppressed.end(),
                       [&](const Suppression& x) { return x.feature == s.feature; })) {
        fl.suppressed.push_back(s);
      }
    }
    std::sort(fl.labels.begin(), fl.labels.end(),
              [](const LabelScore& a, const LabelScore& b) { return a.feature < b.feature; });
    std::sort(fl.suppressed.begin(), fl.suppressed.end(),
              [](const Suppression& a, const Suppression& b) { return a.feature < b.feature; });
    out.push_back(std::move(fl));
  }
  return out;
}

std::vector<FeatureInstance> group_instances(const GeomContext& ctx, const TemplateLibrary& lib,
                                             const DescriptorCache& cache, const std::vector<FaceLabel>& labels) {
  const Model& m = ctx.model();
  std::vector<FeatureInstance> out;
  for (FeatureType f : all_features()) {
    // Base faces carrying this label, with their witness members.
    std::vector<int> bases;
    std::map<int, std::set<int>> members;
    for (const FaceLabel& fl : labels) {
      for (const LabelScore& l : fl.labels) {
        if (l.feature != f) continue;
        const FeatureTemplate& t = find_template(lib, f, l.variant);
        bases.push_back(fl.face_id);
        members[fl.face_id] = witness_members(cache.get(fl.face_id, t.fold_angles), t);
      }
    }
    std::vector<int> parent(bases.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (std::size_t i = 0; i < bases.size(); ++i) {
      const Descriptor& d = cache.get(bases[i], true);
      for (std::size_t j = 0; j < bases.size(); ++j) {
        if (i == j) continue;
        const bool smooth_mate = std::any_of(d.adjacency.begin(), d.adjacency.end(), [&](const AdjacencyRecord& a) {
          return a.face_id == bases[j] && a.continuity == ContinuityClass::Higher;
        });
        if (smooth_mate && same_surface(ctx, m.face(bases[i]), m.face(bases[j]))) {
          parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }
      }
    }
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < bases.size(); ++i) groups[find(static_cast<int>(i))].push_back(i);
    for (const auto& [root, idx] : groups) {
      (void)root;
      FeatureInstance inst;
      inst.feature = f;
      std::set<int> all;
      int base = bases[idx.front()];
      for (std::size_t i : idx) {
        base = std::min(base, bases[i]);
        all.insert(members[bases[i]].begin(), members[bases[i]].end());
      }
      inst.base_face = base;
      inst.members.assign(all.begin(), all.end());
      inst.params = instance_params(m, f, cache.get(base, true), inst.members);
      out.push_back(std::move(inst));
    }
  }
  std::sort(out.begin(), out.end(), [](const FeatureInstance& a, const FeatureInstance& b) {
    return a.base_face != b.base_face ? a.base_face < b.base_face : a.feature < b.feature;
  });
  return out;
}

RecognitionResult recognize(const Model& m, const TemplateLibrary& lib, const MachiningConditions& cond,
                            const RecognitionConfig& cfg, const Tolerances& tol) {
  if (lib.templates.empty()) throw SchemaError("template library is empty");
  const GeomContext ctx(m, tol);
  const DescriptorCache cache = extract_all(ctx, lib, cond);
  const Candidates cand = score_faces(lib, cache, cfg);
  RecognitionResult r;
  r.faces = apply_priority(lib, cache, cand);
  r.instances = group_instances(ctx, lib, cache, r.faces);
  r.config = cfg;
  r.conditions = cond;
  r.tolerances = tol;
  r.template_version = lib.version;
  return r;
}

// ---------------------------------------------------------------------------

std::string result_to_json(const RecognitionResult& r) {
  json doc;
  doc["config"] = {{"threshold", r.config.threshold},
                   {"conditions",
                    {{"slot_width_threshold", r.conditions.slot_width_threshold},
                     {"fillet_width_threshold", r.conditions.fillet_width_threshold},
                     {"chamfer_width_threshold", r.conditions.chamfer_width_threshold}}},
                   {"tolerances",
                    {{"angular", r.tolerances.angular},
                     {"length_rel", r.tolerances.length_rel},
                     {"ray_epsilon", r.tolerances.ray_epsilon}}},
                   {"template_version", r.template_version}};
  json faces = json::array();
  for (const FaceLabel& fl : r.faces) {
    json labels = json::array();
    for (const LabelScore& l : fl.labels) {
      labels.push_back({{"feature", std::string(to_string(l.feature))},
                        {"variant", l.variant},
                        {"r", l.r},
                        {"scores", l.scores}});
    }
    json sup = json::array();
    for (const Suppression& s : fl.suppressed) {
      sup.push_back({{"feature", std::string(to_string(s.feature))}, {"reason", s.reason}});
    }
    faces.push_back({{"id", fl.face_id}, {"labels", labels}, {"suppressed", sup}});
  }
  json inst = json::array();
  for (const FeatureInstance& i : r.instances) {
    inst.push_back({{"feature", std::string(to_string(i.feature))},
                    {"base_face", i.base_face},
                    {"members", i.members},
                    {"params", i.params}});
  }
  doc["faces"] = faces;
  doc["instances"] = inst;
  return doc.dump(2);
}

std::map<int, std::set<FeatureType>> labels_from_result_json(std::string_view text) {
  std::map<int, std::set<FeatureType>> out;
  try {
    const json doc = json::parse(text);
    for (const json& f : doc.at("faces")) {
      auto& set = out[f.at("id").get<int>()];
      for (const json& l : f.at("labels")) set.insert(feature_from_string(l.at("feature").get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed recognition result: ") + e.what());
  }
  return out;
}

}  // namespace mfr
