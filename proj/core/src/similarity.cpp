#include "mfr/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "mfr/errors.hpp"

namespace mfr {

void validate(const RecognitionConfig& cfg) {
  if (!(cfg.threshold > 0.0) || cfg.threshold > 1.0) throw SchemaError("threshold must lie in (0, 1]");
}

int compare_magnitude(const ItemValue& tv, const ItemValueSet& target) {
  if (tv.face_type != FaceType::Any) return target.count(tv.face_type, tv.convexity);
  int n = 0;
  for (const auto& [key, count] : target.entries()) {
    if (key.second == tv.convexity) n += count;
  }
  return n;
}

namespace {

const std::vector<ItemValue>& as_list(const TemplateValue& v) {
  if (const auto* l = std::get_if<std::vector<ItemValue>>(&v)) return *l;
  throw SchemaError("scalar constraint '" + std::get<std::string>(v) + "' applied to a set item");
}

bool set_equal(const std::vector<ItemValue>& want, const ItemValueSet& target) {
  for (const ItemValue& e : want) {
    if (compare_magnitude(e, target) != e.count) return false;
  }
  // Nothing in the target may escape the template's entries.
  for (const auto& [key, count] : target.entries()) {
    const bool covered = std::any_of(want.begin(), want.end(), [&](const ItemValue& e) {
      return e.convexity == key.second && (e.face_type == FaceType::Any || e.face_type == key.first);
    });
    if (!covered) return false;
  }
  return true;
}

}  // namespace

ConstraintScore constraint_scores(const TemplateItem& item, const ItemData& target) {
  ConstraintScore cs;
  if (const auto* word = std::get_if<std::string>(&target)) {
    if (item.minimum || item.maximum) throw SchemaError("min/max constraint on a scalar item");
    if (item.equal) {
      const auto* want = std::get_if<std::string>(&*item.equal);
      if (!want) throw SchemaError("set constraint applied to a scalar item");
      cs.a_equal = *want == *word ? 1 : 0;
    }
    return cs;
  }
  const ItemValueSet& set = std::get<ItemValueSet>(target);
  if (item.minimum) {
    for (const ItemValue& e : as_list(*item.minimum)) {
      if (compare_magnitude(e, set) < e.count) cs.a_min = 0;
    }
  }
  if (item.maximum) {
    for (const ItemValue& e : as_list(*item.maximum)) {
      if (compare_magnitude(e, set) > e.count) cs.a_max = 0;
    }
  }
  if (item.equal) cs.a_equal = set_equal(as_list(*item.equal), set) ? 1 : 0;
  return cs;
}

ItemScore item_score(const ConstraintScore& cs) { return {cs.a_min * cs.a_max * cs.a_equal}; }

SimilarityScore descriptor_similarity(const FeatureTemplate& tmpl, const Descriptor& target,
                                      const WeightVector* weights) {
  SimilarityScore out;
  for (const auto& [name, item] : tmpl.items) {
    if (!item.active()) continue;
    ItemResult res;
    res.constraints = constraint_scores(item, item_value(target, name));
    res.score = item_score(res.constraints);
    out.per_item.emplace(name, res);
    ++out.active;
    out.satisfied += res.score.s;
  }
  if (out.active == 0) throw NoActiveItems("template " + std::string(to_string(tmpl.feature)) + "/" +
                                           tmpl.variant_id + " has no constrained items");

  const std::map<std::string, double>* source = nullptr;
  if (weights) source = &weights->w;
  else if (!tmpl.weights.empty()) source = &tmpl.weights;

  if (!source) {
    out.uniform = true;
    for (auto& [name, res] : out.per_item) res.weight = 1.0 / out.active;
    out.r = static_cast<double>(out.satisfied) / static_cast<double>(out.active);
    return out;
  }
  out.uniform = false;
  double total = 0;
  for (auto& [name, res] : out.per_item) {
    const auto it = source->find(name);
    if (it == source->end()) throw SchemaError("no weight given for item '" + name + "'");
    if (!(it->second > 0)) throw SchemaError("weight of item '" + name + "' must be positive");
    total += it->second;
  }
  double r = 0;
  for (auto& [name, res] : out.per_item) {
    res.weight = source->at(name) / total;
    r += res.weight * res.score.s;
  }
  // Full satisfaction is exactly 1 whatever rounding the weights carry.
  out.r = out.satisfied == out.active ? 1.0 : std::clamp(r, 0.0, 1.0);
  if (out.satisfied < out.active && out.r >= 1.0) out.r = std::nextafter(1.0, 0.0);
  return out;
}

bool classify(const SimilarityScore& score, const RecognitionConfig& cfg) { return score.r >= cfg.threshold; }

}  // namespace mfr
