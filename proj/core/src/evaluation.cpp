#include "mfr/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "mfr/errors.hpp"

namespace mfr {

using nlohmann::json;
using Rational = boost::multiprecision::cpp_rational;

namespace {

constexpr std::array<FeatureType, kFeatureCount> kPrecedence{
    FeatureType::CounterboreHole, FeatureType::CounterdrilledHole, FeatureType::CountersinkHole,
    FeatureType::ClosedIsland,    FeatureType::OpenedIsland,       FeatureType::SimpleHole,
    FeatureType::TaperHole,       FeatureType::SimpleSlot,         FeatureType::FloorlessSlot,
    FeatureType::ClosedPocket,    FeatureType::OpenedPocket,       FeatureType::FloorlessPocket,
    FeatureType::InnerFillet,     FeatureType::OuterFillet,        FeatureType::InnerChamfer,
    FeatureType::OuterChamfer};

int class_of(std::optional<FeatureType> f) { return f ? static_cast<int>(*f) : kNoneClass; }

Rational ratio(long long num, long long den) { return den == 0 ? Rational(0) : Rational(num) / Rational(den); }

}  // namespace

Truth truth_from_json(std::string_view text) {
  Truth t;
  try {
    const json doc = json::parse(text);
    t.face_ids = doc.at("face_ids").get<std::vector<int>>();
    for (const json& f : doc.at("features")) {
      TruthFeature tf;
      tf.feature = feature_from_string(f.at("feature").get<std::string>());
      tf.base_face = f.at("base_face").get<int>();
      tf.base_faces = f.contains("base_faces") ? f.at("base_faces").get<std::vector<int>>() : std::vector<int>{tf.base_face};
      tf.members = f.value("members", std::vector<int>{});
      t.features.push_back(std::move(tf));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed truth file: ") + e.what());
  }
  return t;
}

std::string truth_to_json(const Truth& t) {
  json doc;
  doc["face_ids"] = t.face_ids;
  json arr = json::array();
  for (const TruthFeature& f : t.features) {
    arr.push_back({{"feature", std::string(to_string(f.feature))},
                   {"base_face", f.base_face},
                   {"base_faces", f.base_faces},
                   {"members", f.members}});
  }
  doc["features"] = arr;
  return doc.dump(2);
}

FaceLabels truth_labels(const Truth& t) {
  FaceLabels out;
  for (int id : t.face_ids) out[id];
  for (const TruthFeature& f : t.features) {
    for (int id : f.base_faces) {
      if (!out.count(id)) throw FaceSetMismatch("truth base face " + std::to_string(id) + " not in face_ids");
      out[id].insert(f.feature);
    }
  }
  return out;
}

std::optional<FeatureType> primary_label(const std::set<FeatureType>& labels) {
  for (FeatureType f : kPrecedence) {
    if (labels.count(f)) return f;
  }
  return std::nullopt;
}

std::string class_name(int cls) {
  return cls == kNoneClass ? "none" : std::string(to_string(static_cast<FeatureType>(cls)));
}

long long ConfusionMatrix::total() const {
  long long n = 0;
  for (const auto& row : counts) {
    for (long long c : row) n += c;
  }
  return n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  for (int i = 0; i < kClassCount; ++i) {
    for (int j = 0; j < kClassCount; ++j) counts[i][j] += o.counts[i][j];
  }
  return *this;
}

std::pair<int, int> face_cell(const std::set<FeatureType>& truth, const std::set<FeatureType>& pred) {
  const int t = class_of(primary_label(truth));
  if (truth == pred) return {t, t};
  const bool shared_edge_treatment = std::any_of(truth.begin(), truth.end(), [&](FeatureType f) {
    return is_edge_treatment(f) && pred.count(f);
  });
  const bool only_extra_treatments =
      !truth.empty() && std::includes(pred.begin(), pred.end(), truth.begin(), truth.end()) &&
      std::all_of(pred.begin(), pred.end(), [&](FeatureType f) { return truth.count(f) || is_edge_treatment(f); });
  if (shared_edge_treatment || only_extra_treatments) return {t, t};
  std::set<FeatureType> extra;
  std::set_difference(pred.begin(), pred.end(), truth.begin(), truth.end(), std::inserter(extra, extra.end()));
  return {t, class_of(primary_label(extra))};
}

ConfusionMatrix confusion(const FaceLabels& truth, const FaceLabels& pred) {
  if (truth.size() != pred.size() ||
      !std::equal(truth.begin(), truth.end(), pred.begin(), [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw FaceSetMismatch("truth and prediction cover different face sets (" + std::to_string(truth.size()) + " vs " +
                          std::to_string(pred.size()) + " faces)");
  }
  ConfusionMatrix cm;
  auto p = pred.begin();
  for (const auto& [id, labels] : truth) {
    const auto [ti, pi] = face_cell(labels, p->second);
    ++cm.counts[ti][pi];
    ++p;
  }
  return cm;
}

ClassCounts class_counts(const ConfusionMatrix& cm, int cls) {
  ClassCounts c;
  const long long total = cm.total();
  c.tp = cm.counts[cls][cls];
  for (int k = 0; k < kClassCount; ++k) {
    if (k == cls) continue;
    c.fp += cm.counts[k][cls];
    c.fn += cm.counts[cls][k];
  }
  c.tn = total - c.tp - c.fp - c.fn;
  return c;
}

namespace {

struct ExactMetrics {
  Rational precision, recall, accuracy, f1;
};

ExactMetrics exact(const ClassCounts& c) {
  ExactMetrics e;
  e.precision = ratio(c.tp, c.tp + c.fp);
  e.recall = ratio(c.tp, c.tp + c.fn);
  e.accuracy = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn);
  const Rational pr = e.precision + e.recall;
  e.f1 = pr == 0 ? Rational(0) : Rational(2 * e.precision * e.recall / pr);
  return e;
}

}  // namespace

Metrics class_metrics(const ClassCounts& c) {
  const ExactMetrics e = exact(c);
  Metrics m;
  m.precision = static_cast<double>(e.precision);
  m.recall = static_cast<double>(e.recall);
  m.accuracy = static_cast<double>(e.accuracy);
  m.f1 = static_cast<double>(e.f1);
  return m;
}

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw EmptyMatrix("confusion matrix has no entries");
  Metrics m;
  Rational p_sum = 0, r_sum = 0, a_sum = 0, f_sum = 0;
  for (int cls = 0; cls < kClassCount; ++cls) {
    long long row = 0;
    for (long long v : cm.counts[cls]) row += v;
    if (row == 0) continue;
    m.classes.push_back(cls);
    const ExactMetrics e = exact(class_counts(cm, cls));
    p_sum += e.precision;
    r_sum += e.recall;
    a_sum += e.accuracy;
    f_sum += e.f1;
  }
  const Rational k = static_cast<long long>(m.classes.size());
  m.precision = static_cast<double>(p_sum / k);
  m.recall = static_cast<double>(r_sum / k);
  m.accuracy = static_cast<double>(a_sum / k);
  m.f1 = static_cast<double>(f_sum / k);
  return m;
}

std::string format4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string metrics_report_json(const ConfusionMatrix& cm, const Metrics& m) {
  json doc;
  doc["averaging"] = "macro over classes present in truth; NONE counts as a class";
  doc["faces"] = cm.total();
  doc["precision"] = format4(m.precision);
  doc["recall"] = format4(m.recall);
  doc["accuracy"] = format4(m.accuracy);
  doc["f1"] = format4(m.f1);
  json classes = json::array();
  for (int cls : m.classes) {
    const ClassCounts c = class_counts(cm, cls);
    classes.push_back({{"class", class_name(cls)}, {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}});
  }
  doc["classes"] = classes;
  long long off = 0;
  for (int i = 0; i < kClassCount; ++i) {
    for (int j = 0; j < kClassCount; ++j) {
      if (i != j) off += cm.counts[i][j];
    }
  }
  doc["off_diagonal"] = off;
  return doc.dump(2);
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::ostringstream os;
  os << "truth\\pred";
  for (int j = 0; j < kClassCount; ++j) os << ',' << class_name(j);
  os << '\n';
  for (int i = 0; i < kClassCount; ++i) {
    os << class_name(i);
    for (int j = 0; j < kClassCount; ++j) os << ',' << cm.counts[i][j];
    os << '\n';
  }
  return os.str();
}

}  // namespace mfr
