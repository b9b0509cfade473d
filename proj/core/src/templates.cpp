#include "mfr/templates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "json.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"

namespace mfr {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<FeatureType, std::string_view>, kFeatureCount> kNames{{
    {FeatureType::CounterboreHole, "counterbore_hole"},
    {FeatureType::CounterdrilledHole, "counterdrilled_hole"},
    {FeatureType::CountersinkHole, "countersink_hole"},
    {FeatureType::SimpleHole, "simple_hole"},
    {FeatureType::TaperHole, "taper_hole"},
    {FeatureType::SimpleSlot, "simple_slot"},
    {FeatureType::FloorlessSlot, "floorless_slot"},
    {FeatureType::ClosedPocket, "closed_pocket"},
    {FeatureType::OpenedPocket, "opened_pocket"},
    {FeatureType::FloorlessPocket, "floorless_pocket"},
    {FeatureType::ClosedIsland, "closed_island"},
    {FeatureType::OpenedIsland, "opened_island"},
    {FeatureType::InnerFillet, "inner_fillet"},
    {FeatureType::OuterFillet, "outer_fillet"},
    {FeatureType::InnerChamfer, "inner_chamfer"},
    {FeatureType::OuterChamfer, "outer_chamfer"},
}};

}  // namespace

std::string_view to_string(FeatureType f) {
  for (const auto& [t, n] : kNames) {
    if (t == f) return n;
  }
  return "unknown";
}

FeatureType feature_from_string(std::string_view s) {
  for (const auto& [t, n] : kNames) {
    if (n == s) return t;
  }
  throw SchemaError("unknown feature subtype '" + std::string(s) + "'");
}

const std::vector<FeatureType>& all_features() {
  static const std::vector<FeatureType> v = [] {
    std::vector<FeatureType> out;
    for (const auto& [t, n] : kNames) out.push_back(t);
    return out;
  }();
  return v;
}

bool is_composite_hole(FeatureType f) {
  return f == FeatureType::CounterboreHole || f == FeatureType::CounterdrilledHole ||
         f == FeatureType::CountersinkHole;
}

bool is_hole_family(FeatureType f) { return f == FeatureType::SimpleHole || f == FeatureType::TaperHole; }

bool is_edge_treatment(FeatureType f) {
  return f == FeatureType::InnerFillet || f == FeatureType::OuterFillet || f == FeatureType::InnerChamfer ||
         f == FeatureType::OuterChamfer;
}

std::string to_string(const TemplateValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  std::string out;
  for (const ItemValue& iv : std::get<std::vector<ItemValue>>(v)) {
    if (!out.empty()) out += ' ';
    out += to_string(iv);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

ItemValue parse_item_value(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected {face_type, convexity, count}");
  ItemValue v;
  const auto ft = face_type_from_string(j.value("face_type", ""));
  if (!ft) throw SchemaError(where + ": unknown face_type");
  v.face_type = *ft;
  const std::string c = j.value("convexity", "");
  if (c == "CONVEX") v.convexity = Convexity::Convex;
  else if (c == "CONCAVE") v.convexity = Convexity::Concave;
  else throw SchemaError(where + ": unknown convexity '" + c + "'");
  if (!j.contains("count") || !j.at("count").is_number_integer() || j.at("count").get<int>() < 0) {
    throw SchemaError(where + ": count must be a non-negative integer");
  }
  v.count = j.at("count").get<int>();
  return v;
}

TemplateValue parse_value(const json& j, const ItemInfo& info, const std::string& where) {
  if (info.kind == ItemKind::Scalar) {
    if (!j.is_string()) throw SchemaError(where + ": expected a scalar word");
    const std::string s = j.get<std::string>();
    if (std::find(info.allowed.begin(), info.allowed.end(), s) == info.allowed.end()) {
      throw SchemaError(where + ": value '" + s + "' not allowed");
    }
    return s;
  }
  std::vector<ItemValue> out;
  if (j.is_array()) {
    for (const json& e : j) out.push_back(parse_item_value(e, where));
  } else {
    out.push_back(parse_item_value(j, where));
  }
  if (out.empty()) throw SchemaError(where + ": empty value list");
  return out;
}

json value_json(const TemplateValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  const auto& list = std::get<std::vector<ItemValue>>(v);
  json arr = json::array();
  for (const ItemValue& iv : list) {
    arr.push_back({{"face_type", std::string(to_string(iv.face_type))},
                   {"convexity", std::string(to_string(iv.convexity))},
                   {"count", iv.count}});
  }
  return list.size() == 1 ? arr[0] : arr;
}

}  // namespace

TemplateLibrary parse_templates(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed template JSON: ") + e.what());
  }
  TemplateLibrary lib;
  try {
    if (!doc.is_object() || !doc.contains("templates")) throw SchemaError("template document needs 'templates'");
    lib.version = doc.contains("version") ? (doc.at("version").is_string() ? doc.at("version").get<std::string>()
                                                                           : doc.at("version").dump())
                                          : "";
    std::set<std::pair<std::string, std::string>> seen;
    for (const json& t : doc.at("templates")) {
      FeatureTemplate ft;
      ft.feature = feature_from_string(t.at("feature").get<std::string>());
      ft.variant_id = t.value("variant_id", "default");
      ft.composite = t.value("composite", false);
      ft.fold_angles = t.value("fold_angles", true);
      const std::string where = std::string(to_string(ft.feature)) + "/" + ft.variant_id;
      if (!seen.insert({std::string(to_string(ft.feature)), ft.variant_id}).second) {
        throw SchemaError(where + ": duplicate variant");
      }
      if (ft.composite != is_composite_hole(ft.feature)) {
        throw SchemaError(where + ": composite flag disagrees with the feature subtype");
      }
      for (const auto& [name, body] : t.at("items").items()) {
        const ItemInfo* info = find_item(name);
        if (!info) throw SchemaError(where + ": unknown item '" + name + "'");
        TemplateItem item;
        for (const auto& [key, val] : body.items()) {
          const std::string w = where + "." + name + "." + key;
          if (key == "min") item.minimum = parse_value(val, *info, w);
          else if (key == "max") item.maximum = parse_value(val, *info, w);
          else if (key == "equal") item.equal = parse_value(val, *info, w);
          else throw SchemaError(w + ": expected min, max or equal");
          if (info->kind == ItemKind::Scalar && key != "equal") {
            throw SchemaError(w + ": scalar items accept only 'equal'");
          }
        }
        if (!item.active()) throw SchemaError(where + "." + name + ": no constraint set");
        ft.items.emplace(name, std::move(item));
      }
      if (ft.items.empty()) throw SchemaError(where + ": template has no items");
      if (t.contains("weights")) {
        double sum = 0;
        for (const auto& [name, w] : t.at("weights").items()) {
          if (!ft.items.count(name)) throw SchemaError(where + ": weight for absent item '" + name + "'");
          const double x = w.get<double>();
          if (!(x > 0)) throw WeightSumError(where + ": weight of '" + name + "' must be positive");
          ft.weights[name] = x;
          sum += x;
        }
        if (ft.weights.size() != ft.items.size()) {
          throw WeightSumError(where + ": weights must cover every constrained item");
        }
        if (std::fabs(sum - 1.0) > 1e-12) {
          throw WeightSumError(where + ": weights sum to " + std::to_string(sum) + ", expected 1");
        }
      }
      lib.templates.push_back(std::move(ft));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("template schema violation: ") + e.what());
  }
  std::stable_partition(lib.templates.begin(), lib.templates.end(),
                        [](const FeatureTemplate& t) { return t.composite; });
  return lib;
}

TemplateLibrary load_templates(const std::filesystem::path& path) {
  return parse_templates(read_text_file(path));
}

const TemplateLibrary& default_library() {
  static const TemplateLibrary lib = parse_templates(default_template_json());
  return lib;
}

std::string templates_to_json(const TemplateLibrary& lib) {
  json doc;
  doc["version"] = lib.version;
  json arr = json::array();
  for (const FeatureTemplate& t : lib.templates) {
    json items = json::object();
    for (const auto& [name, item] : t.items) {
      json body = json::object();
      if (item.minimum) body["min"] = value_json(*item.minimum);
      if (item.maximum) body["max"] = value_json(*item.maximum);
      if (item.equal) body["equal"] = value_json(*item.equal);
      items[name] = body;
    }
    json jt = {{"feature", std::string(to_string(t.feature))},
               {"variant_id", t.variant_id},
               {"composite", t.composite},
               {"fold_angles", t.fold_angles},
               {"items", items}};
    if (!t.weights.empty()) jt["weights"] = t.weights;
    arr.push_back(jt);
  }
  doc["templates"] = arr;
  return doc.dump(2);
}

}  // namespace mfr
