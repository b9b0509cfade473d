#pragma once

// The 20-item face descriptor: face items, outer/inner loop item sets and
// auxiliary booleans.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mfr/brep.hpp"
#include "mfr/geom.hpp"

namespace mfr {

enum class CurvatureClass { Positive, Flat, Negative };
enum class WidthLevel { Longer, Shorter };

std::string_view to_string(CurvatureClass c);
std::string_view to_string(WidthLevel w);

/// "face type | convexity : count".
struct ItemValue {
  FaceType face_type = FaceType::Any;
  Convexity convexity = Convexity::Convex;
  int count = 0;

  bool operator==(const ItemValue&) const = default;
};

std::string to_string(const ItemValue& v);

/// At most one entry per (face type, convexity); counts are positive.
class ItemValueSet {
 public:
  using Key = std::pair<FaceType, Convexity>;

  void add(FaceType t, Convexity c, int n = 1);
  int count(FaceType t, Convexity c) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::vector<ItemValue> values() const;
  const std::map<Key, int>& entries() const { return entries_; }

  bool operator==(const ItemValueSet&) const = default;

 private:
  std::map<Key, int> entries_;
};

std::string to_string(const ItemValueSet& s);

struct MachiningConditions {
  double slot_width_threshold = 15.0;
  double fillet_width_threshold = 6.0;
  double chamfer_width_threshold = 6.0;
};

/// Throws SchemaError unless every threshold is positive.
void validate(const MachiningConditions& c);

/// The six relation buckets of one loop class.
struct LoopItems {
  ItemValueSet convexity;
  ItemValueSet continuity;
  ItemValueSet parallel;
  ItemValueSet perpendicular;
  ItemValueSet acute;
  ItemValueSet obtuse;

  bool operator==(const LoopItems&) const = default;
};

/// How one neighbour across one shared edge was classified.
struct AdjacencyRecord {
  LoopKind loop = LoopKind::Outer;
  int face_id = 0;
  int edge_id = 0;
  FaceType face_type = FaceType::Plan;
  Convexity convexity = Convexity::Convex;
  ContinuityClass continuity = ContinuityClass::C0;
  AngleClass angle = AngleClass::Parallel;
};

struct Descriptor {
  int face_id = 0;
  FaceType f_facetype = FaceType::Plan;
  CurvatureClass f_curvature = CurvatureClass::Flat;
  WidthLevel f_facemachining = WidthLevel::Longer;
  WidthLevel f_filletmachining = WidthLevel::Longer;
  WidthLevel f_chamfermachining = WidthLevel::Longer;
  LoopItems ol;
  LoopItems il;
  bool ax_parallel = false;
  bool ax_coaxial = false;
  bool ax_interference = false;

  // Measurements behind the width levels, kept for reporting.
  double face_width = 0.0;
  std::optional<double> pair_width;
  std::vector<AdjacencyRecord> adjacency;
};

enum class ItemKind { Scalar, Set };

struct ItemInfo {
  std::string_view name;
  ItemKind kind;
  std::vector<std::string_view> allowed;  // scalar vocabularies; empty for sets
};

/// All 20 items in canonical order.
const std::vector<ItemInfo>& descriptor_items();
const ItemInfo* find_item(std::string_view name);

/// Scalar items read as their vocabulary word (PLAN, FLAT, LONGER, TRUE, ...).
using ItemData = std::variant<std::string, ItemValueSet>;

/// Throws SchemaError for unknown item names.
ItemData item_value(const Descriptor& d, std::string_view name);

/// `fold_angles` selects folded (sign-free) angle classes. Throws UnknownFace.
Descriptor extract_descriptor(const GeomContext& ctx, int face_id, const MachiningConditions& cond,
                              bool fold_angles = true);
Descriptor extract_descriptor(const Model& m, int face_id, const MachiningConditions& cond,
                              bool fold_angles = true);

/// Pretty JSON object with every item.
std::string descriptor_to_json(const Descriptor& d);

/// One item per line, e.g. "ol_convexity  CYLI|CONCAVE:2 PLAN|CONVEX:1".
std::string descriptor_to_text(const Descriptor& d);

/// The built-in template library document (JSON).
std::string_view default_template_json();

}  // namespace mfr
