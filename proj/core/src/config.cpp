#include "mfr/config.hpp"

#include "json.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"

namespace mfr {

using nlohmann::json;

namespace {

void read_field(const json& block, const char* key, double& out) {
  if (!block.contains(key)) return;
  if (!block.at(key).is_number()) throw SchemaError(std::string("config field '") + key + "' must be a number");
  out = block.at(key).get<double>();
}

void reject_unknown(const json& block, std::initializer_list<const char*> keys, const char* where) {
  for (const auto& [k, v] : block.items()) {
    (void)v;
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw SchemaError(std::string("unknown field '") + k + "' in config block '" + where + "'");
  }
}

}  // namespace

EngineConfig parse_config(std::string_view json_text) {
  EngineConfig c;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("config must be a JSON object");
  reject_unknown(doc, {"conditions", "tolerances", "recognition"}, "root");
  if (doc.contains("conditions")) {
    const json& b = doc.at("conditions");
    reject_unknown(b, {"slot_width_threshold", "fillet_width_threshold", "chamfer_width_threshold"}, "conditions");
    read_field(b, "slot_width_threshold", c.conditions.slot_width_threshold);
    read_field(b, "fillet_width_threshold", c.conditions.fillet_width_threshold);
    read_field(b, "chamfer_width_threshold", c.conditions.chamfer_width_threshold);
  }
  if (doc.contains("tolerances")) {
    const json& b = doc.at("tolerances");
    reject_unknown(b, {"angular", "length_rel", "ray_epsilon"}, "tolerances");
    read_field(b, "angular", c.tolerances.angular);
    read_field(b, "length_rel", c.tolerances.length_rel);
    read_field(b, "ray_epsilon", c.tolerances.ray_epsilon);
  }
  if (doc.contains("recognition")) {
    const json& b = doc.at("recognition");
    reject_unknown(b, {"threshold"}, "recognition");
    read_field(b, "threshold", c.recognition.threshold);
  }
  validate(c.conditions);
  validate(c.tolerances);
  validate(c.recognition);
  return c;
}

EngineConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

std::string config_to_json(const EngineConfig& c) {
  json doc = {{"conditions",
               {{"slot_width_threshold", c.conditions.slot_width_threshold},
                {"fillet_width_threshold", c.conditions.fillet_width_threshold},
                {"chamfer_width_threshold", c.conditions.chamfer_width_threshold}}},
              {"tolerances",
               {{"angular", c.tolerances.angular},
                {"length_rel", c.tolerances.length_rel},
                {"ray_epsilon", c.tolerances.ray_epsilon}}},
              {"recognition", {{"threshold", c.recognition.threshold}}}};
  return doc.dump(2);
}

}  // namespace mfr
