#pragma once

// Feature templates: per-item minimum / maximum / equal constraints on a base
// face descriptor, grouped into a versioned library.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mfr/descriptor.hpp"

namespace mfr {

enum class FeatureType {
  CounterboreHole,
  CounterdrilledHole,
  CountersinkHole,
  SimpleHole,
  TaperHole,
  SimpleSlot,
  FloorlessSlot,
  ClosedPocket,
  OpenedPocket,
  FloorlessPocket,
  ClosedIsland,
  OpenedIsland,
  InnerFillet,
  OuterFillet,
  InnerChamfer,
  OuterChamfer,
};

inline constexpr int kFeatureCount = 16;

std::string_view to_string(FeatureType f);
/// Throws SchemaError for unknown names.
FeatureType feature_from_string(std::string_view s);
const std::vector<FeatureType>& all_features();

bool is_composite_hole(FeatureType f);
bool is_hole_family(FeatureType f);       // simple and taper holes
bool is_edge_treatment(FeatureType f);    // fillets and chamfers

/// A scalar word or a list of "type|convexity:count" entries (ANY allowed).
using TemplateValue = std::variant<std::string, std::vector<ItemValue>>;

std::string to_string(const TemplateValue& v);

struct TemplateItem {
  std::optional<TemplateValue> minimum;
  std::optional<TemplateValue> maximum;
  std::optional<TemplateValue> equal;

  bool active() const { return minimum || maximum || equal; }
};

struct FeatureTemplate {
  FeatureType feature = FeatureType::SimpleHole;
  std::string variant_id;
  bool composite = false;
  bool fold_angles = true;
  std::map<std::string, TemplateItem> items;
  std::map<std::string, double> weights;  // empty = uniform
};

struct TemplateLibrary {
  std::string version;
  std::vector<FeatureTemplate> templates;  // composites first
};

/// Throws SchemaError on malformed documents and WeightSumError when a
/// template's weights are not positive or do not sum to 1 (within 1e-12).
TemplateLibrary parse_templates(std::string_view json_text);
TemplateLibrary load_templates(const std::filesystem::path& path);
const TemplateLibrary& default_library();

std::string templates_to_json(const TemplateLibrary& lib);

}  // namespace mfr
