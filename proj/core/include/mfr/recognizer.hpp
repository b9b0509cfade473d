#pragma once

// Recognition pipeline: descriptors per face, template scoring, composite
// priority and instance grouping.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfr/descriptor.hpp"
#include "mfr/geom.hpp"
#include "mfr/similarity.hpp"
#include "mfr/templates.hpp"

namespace mfr {

struct LabelScore {
  FeatureType feature = FeatureType::SimpleHole;
  std::string variant;
  double r = 0.0;
  std::map<std::string, int> scores;  // S_k per active item
};

struct Suppression {
  FeatureType feature = FeatureType::SimpleHole;
  std::string reason;
};

struct FaceLabel {
  int face_id = 0;
  std::vector<LabelScore> labels;
  std::vector<Suppression> suppressed;
};

struct FeatureInstance {
  FeatureType feature = FeatureType::SimpleHole;
  int base_face = 0;
  std::vector<int> members;  // sorted, includes base_face
  std::map<std::string, double> params;
};

struct RecognitionResult {
  std::vector<FaceLabel> faces;  // ascending face id
  std::vector<FeatureInstance> instances;
  RecognitionConfig config;
  MachiningConditions conditions;
  Tolerances tolerances;
  std::string template_version;
};

/// Descriptors of every face, extracted with folded angles and, when some
/// template asks for it, without folding.
struct DescriptorCache {
  std::map<int, Descriptor> folded;
  std::map<int, Descriptor> unfolded;

  const Descriptor& get(int face_id, bool fold) const;
};

DescriptorCache extract_all(const GeomContext& ctx, const TemplateLibrary& lib, const MachiningConditions& cond);

/// Every face's passing labels before priority is applied: per feature, the
/// best-scoring variant when it reaches the threshold.
struct Candidates {
  std::map<int, std::vector<LabelScore>> by_face;
};

Candidates score_faces(const TemplateLibrary& lib, const DescriptorCache& cache, const RecognitionConfig& cfg);

/// Drops simple- and taper-hole labels from faces claimed by a composite hole
/// instance (its base face and members).
std::vector<FaceLabel> apply_priority(const TemplateLibrary& lib, const DescriptorCache& cache, const Candidates& cand);

/// One instance per labeled base face; co-surface halves joined by a smooth
/// edge and carrying the same label merge into one instance.
std::vector<FeatureInstance> group_instances(const GeomContext& ctx, const TemplateLibrary& lib,
                                             const DescriptorCache& cache,
                                             const std::vector<FaceLabel>& labels);

/// Base face plus the adjacent faces that witness the template's loop
/// constraints.
std::set<int> witness_members(const Descriptor& d, const FeatureTemplate& tmpl);

RecognitionResult recognize(const Model& m, const TemplateLibrary& lib, const MachiningConditions& cond,
                            const RecognitionConfig& cfg, const Tolerances& tol = {});

/// Deterministic JSON (sorted keys).
std::string result_to_json(const RecognitionResult& r);

/// Labels per face id read back from result JSON. Throws SchemaError.
std::map<int, std::set<FeatureType>> labels_from_result_json(std::string_view text);

}  // namespace mfr
