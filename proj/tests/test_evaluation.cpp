#include <doctest.h>

#include <sstream>

#include "mfr/errors.hpp"
#include "mfr/evaluation.hpp"
#include "mfr/recognizer.hpp"
#include "support.hpp"

using namespace mfr;

namespace {

using F = FeatureType;

long long off_diagonal(const ConfusionMatrix& cm) {
  long long n = 0;
  for (int i = 0; i < kClassCount; ++i) {
    for (int j = 0; j < kClassCount; ++j) n += i == j ? 0 : cm.counts[i][j];
  }
  return n;
}

long long diagonal(const ConfusionMatrix& cm) { return cm.total() - off_diagonal(cm); }

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("single-class arithmetic") {
  const Metrics m = class_metrics({3, 1, 0, 6});
  CHECK(m.precision == 0.75);
  CHECK(m.recall == 1.0);
  CHECK(m.accuracy == 0.9);
  CHECK(m.f1 == doctest::Approx(6.0 / 7.0));
  CHECK(format4(m.f1) == "0.8571");
}

TEST_CASE("F1 guard when precision and recall vanish") {
  const Metrics m = class_metrics({0, 2, 3, 5});
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(m.f1 == 0.0);
}

TEST_CASE("perfect prediction fills the diagonal") {
  FaceLabels truth;
  for (int i = 1; i <= 50; ++i) {
    if (i % 5 == 0) truth[i] = {F::SimpleHole};
    else if (i % 7 == 0) truth[i] = {F::ClosedPocket, F::InnerFillet};
    else truth[i] = {};
  }
  const ConfusionMatrix cm = confusion(truth, truth);
  CHECK(diagonal(cm) == 50);
  const Metrics m = metrics(cm);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.accuracy == 1.0);
  CHECK(m.f1 == 1.0);
}

TEST_CASE("a pocket floor predicted as a slot is one off-diagonal count") {
  FaceLabels truth{{1, {F::ClosedPocket}}, {2, {}}, {3, {}}};
  FaceLabels pred{{1, {F::SimpleSlot}}, {2, {}}, {3, {}}};
  const ConfusionMatrix cm = confusion(truth, pred);
  CHECK(off_diagonal(cm) == 1);
  CHECK(cm.counts[static_cast<int>(F::ClosedPocket)][static_cast<int>(F::SimpleSlot)] == 1);
}

TEST_CASE("dual labels with a fillet or chamfer count as correct") {
  // A fillet face also claimed by a pocket.
  CHECK(face_cell({F::InnerFillet}, {F::InnerFillet, F::ClosedPocket}).first ==
        face_cell({F::InnerFillet}, {F::InnerFillet, F::ClosedPocket}).second);
  // A pocket face with an extra fillet label.
  const auto c = face_cell({F::ClosedPocket}, {F::ClosedPocket, F::InnerFillet});
  CHECK(c.first == c.second);
  // A missing label is still a miss.
  const auto miss = face_cell({F::SimpleSlot, F::ClosedPocket}, {F::SimpleSlot});
  CHECK(miss.first != miss.second);
  const auto none = face_cell({}, {F::SimpleHole});
  CHECK(none.first == kNoneClass);
  CHECK(none.second == static_cast<int>(F::SimpleHole));
}

TEST_CASE("face sets must agree") {
  CHECK_THROWS_AS(confusion({{1, {}}, {2, {}}}, {{1, {}}}), FaceSetMismatch);
  CHECK_THROWS_AS(confusion({{1, {}}}, {{2, {}}}), FaceSetMismatch);
  CHECK_THROWS_AS(metrics(ConfusionMatrix{}), EmptyMatrix);
}

TEST_CASE("macro average covers the classes present in truth") {
  FaceLabels truth{{1, {F::SimpleHole}}, {2, {F::SimpleHole}}, {3, {}}, {4, {}}};
  FaceLabels pred{{1, {F::SimpleHole}}, {2, {}}, {3, {}}, {4, {}}};
  const Metrics m = metrics(confusion(truth, pred));
  CHECK(m.classes == std::vector<int>{static_cast<int>(F::SimpleHole), kNoneClass});
  // hole: P 1, R 1/2; none: P 2/3, R 1.
  CHECK(m.precision == doctest::Approx((1.0 + 2.0 / 3.0) / 2));
  CHECK(m.recall == doctest::Approx((0.5 + 1.0) / 2));
}

TEST_CASE("reports") {
  FaceLabels truth{{1, {F::SimpleHole}}, {2, {}}};
  const ConfusionMatrix cm = confusion(truth, truth);
  const std::string json = metrics_report_json(cm, metrics(cm));
  CHECK(json.find("\"precision\": \"1.0000\"") != std::string::npos);
  CHECK(json.find("macro") != std::string::npos);
  const std::string csv = confusion_csv(cm);
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == kClassCount + 1);
  CHECK(class_name(kNoneClass) == "none");
}

TEST_CASE("standard suite has no off-diagonal counts") {
  ConfusionMatrix total;
  for (const SynthesizedModel& s : test::suite()) {
    if (s.pinned_failure) continue;
    const RecognitionResult r = recognize(s.model, default_library(), {}, {});
    FaceLabels pred;
    for (const FaceLabel& f : r.faces) {
      for (const LabelScore& l : f.labels) pred[f.face_id].insert(l.feature);
      pred[f.face_id];
    }
    total += confusion(truth_labels(s.truth), pred);
  }
  CHECK(off_diagonal(total) == 0);
}

}  // TEST_SUITE
