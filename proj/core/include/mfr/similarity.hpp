#pragma once

// Range-constraint similarity: 0/1 constraint scores, per-item products and
// the weighted total compared against a threshold.

#include <map>
#include <optional>
#include <string>

#include "mfr/descriptor.hpp"
#include "mfr/templates.hpp"

namespace mfr {

/// Each score is 0 or 1; an unset constraint scores 1.
struct ConstraintScore {
  int a_min = 1;
  int a_max = 1;
  int a_equal = 1;

  bool operator==(const ConstraintScore&) const = default;
};

struct ItemScore {
  int s = 1;
};

struct WeightVector {
  std::map<std::string, double> w;
};

struct ItemResult {
  ConstraintScore constraints;
  ItemScore score;
  double weight = 0.0;
};

struct SimilarityScore {
  double r = 0.0;
  int satisfied = 0;
  int active = 0;
  bool uniform = true;  // r == satisfied / active exactly
  std::map<std::string, ItemResult> per_item;
};

struct RecognitionConfig {
  double threshold = 1.0;
};

/// Throws SchemaError unless 0 < threshold <= 1.
void validate(const RecognitionConfig& cfg);

/// Effective count N for one template entry: the matching (type, convexity)
/// count, or for ANY the sum over every type with that convexity.
int compare_magnitude(const ItemValue& template_value, const ItemValueSet& target);

/// Throws SchemaError when a scalar constraint meets a set item or vice versa.
ConstraintScore constraint_scores(const TemplateItem& item, const ItemData& target);

ItemScore item_score(const ConstraintScore& cs);

/// Uniform weights unless the template carries its own or `weights` is given;
/// a supplied vector is renormalized over the template's active items.
/// Throws NoActiveItems and SchemaError (missing or non-positive weights).
SimilarityScore descriptor_similarity(const FeatureTemplate& tmpl, const Descriptor& target,
                                      const WeightVector* weights = nullptr);

bool classify(const SimilarityScore& score, const RecognitionConfig& cfg);

}  // namespace mfr
