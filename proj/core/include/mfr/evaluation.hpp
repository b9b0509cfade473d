#pragma once

// Per-face multi-class evaluation: confusion matrix and macro-averaged
// precision, recall, accuracy and F1.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mfr/templates.hpp"

namespace mfr {

using FaceLabels = std::map<int, std::set<FeatureType>>;

struct TruthFeature {
  FeatureType feature = FeatureType::SimpleHole;
  int base_face = 0;
  std::vector<int> base_faces;  // every face carrying the label (halves included)
  std::vector<int> members;
};

struct Truth {
  std::vector<int> face_ids;
  std::vector<TruthFeature> features;
};

Truth truth_from_json(std::string_view text);
std::string truth_to_json(const Truth& t);

/// Every face id of the truth, mapped to the labels of the features it is a
/// base face of (empty = NONE).
FaceLabels truth_labels(const Truth& t);

/// Highest-precedence label of a set; nullopt for the empty set.
std::optional<FeatureType> primary_label(const std::set<FeatureType>& labels);

/// Classes are the 16 subtypes in enum order followed by NONE.
inline constexpr int kNoneClass = kFeatureCount;
inline constexpr int kClassCount = kFeatureCount + 1;
std::string class_name(int cls);

struct ConfusionMatrix {
  std::vector<std::vector<long long>> counts =
      std::vector<std::vector<long long>>(kClassCount, std::vector<long long>(kClassCount, 0));

  long long total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

/// (truth class, predicted class) of one face. Equal label sets land on the
/// diagonal, as does a fillet or chamfer truth label that the prediction
/// also carries, or a prediction whose only extra labels are fillets or
/// chamfers.
std::pair<int, int> face_cell(const std::set<FeatureType>& truth, const std::set<FeatureType>& pred);

/// Throws FaceSetMismatch unless both maps cover the same face ids.
ConfusionMatrix confusion(const FaceLabels& truth, const FaceLabels& pred);

struct ClassCounts {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
};

ClassCounts class_counts(const ConfusionMatrix& cm, int cls);

struct Metrics {
  double precision = 0, recall = 0, accuracy = 0, f1 = 0;
  std::vector<int> classes;  // classes averaged over (present in truth)
};

/// Precision, recall, accuracy and F1 of one class (F1 = 0 when P + R = 0).
Metrics class_metrics(const ClassCounts& c);

/// Macro average over the classes present in truth, computed with exact
/// rationals. Throws EmptyMatrix.
Metrics metrics(const ConfusionMatrix& cm);

/// Value rounded to four decimals, e.g. "0.8571".
std::string format4(double v);

std::string metrics_report_json(const ConfusionMatrix& cm, const Metrics& m);
std::string confusion_csv(const ConfusionMatrix& cm);

}  // namespace mfr
