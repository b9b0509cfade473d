// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"
#include "mfr/recognizer.hpp"
#include "mfr/step.hpp"
#include "mfr/surface.hpp"
#include "mfr/synth.hpp"

using namespace mfr;
using Rational = boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

const std::vector<SynthesizedModel>& suite() {
  static const std::vector<SynthesizedModel> s = standard_suite();
  return s;
}

const SynthesizedModel& fixture(const std::string& name) {
  for (const SynthesizedModel& s : suite()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no fixture " + name);
}

int base_face(const SynthesizedModel& s, FeatureType f) {
  for (const TruthFeature& t : s.truth.features) {
    if (t.feature == f) return t.base_face;
  }
  throw std::out_of_range("no truth feature");
}

const FeatureTemplate& template_for(FeatureType f) {
  for (const FeatureTemplate& t : default_library().templates) {
    if (t.feature == f) return t;
  }
  throw std::out_of_range("no template");
}

std::set<FeatureType> labels_on(const RecognitionResult& r, int face) {
  std::set<FeatureType> out;
  for (const FaceLabel& f : r.faces) {
    if (f.face_id != face) continue;
    for (const LabelScore& l : f.labels) out.insert(l.feature);
  }
  return out;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "mfr");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (code != 0) std::cerr << err.str();
  return code;
}

ItemValueSet set_of(std::initializer_list<ItemValue> vs) {
  ItemValueSet s;
  for (const ItemValue& v : vs) s.add(v.face_type, v.convexity, v.count);
  return s;
}

// 1 -------------------------------------------------------------------------
Outcome full_suite() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto dir = std::filesystem::temp_directory_path() / "mfr_acceptance_suite";
  std::filesystem::remove_all(dir);
  o.require(cli({"generate", "--suite", "standard", "--out-dir", dir.string()}) == 0, "suite generation failed");

  std::set<FeatureType> subtypes;
  std::set<HoleRepresentation> reps;
  std::set<std::size_t> stocks;
  std::vector<std::string> eval = {"evaluate"};
  int fixtures = 0;
  for (const SynthesizedModel& s : suite()) {
    if (s.pinned_failure) continue;
    ++fixtures;
    for (const TruthFeature& t : s.truth.features) subtypes.insert(t.feature);
    for (const FeatureSpec& f : s.part.features) {
      if (f.feature == FeatureType::SimpleHole) reps.insert(f.representation);
    }
    stocks.insert(s.part.stock.index());
    const std::string model = (dir / (s.name + ".model.json")).string();
    const std::string result = (dir / (s.name + ".result.json")).string();
    o.require(cli({"recognize", "--model", model, "--out", result}) == 0, "recognize failed on " + s.name);
    eval.insert(eval.end(), {"--pred", result, "--truth", (dir / (s.name + ".truth.json")).string()});
  }
  std::string report_text;
  o.require(cli(eval, &report_text) == 0, "evaluate failed");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(fixtures >= 24, "only " + std::to_string(fixtures) + " fixtures");
  o.require(subtypes.size() == 16, "subtypes covered: " + std::to_string(subtypes.size()));
  o.require(reps.size() == 2 && stocks.size() == 2, "representations or stock kinds missing");
  if (o.pass) {
    const auto report = nlohmann::json::parse(report_text);
    for (const char* k : {"precision", "recall", "accuracy", "f1"}) {
      o.require(report.at(k) == "1.0000", std::string(k) + " = " + report.at(k).get<std::string>());
    }
  }
  o.require(seconds < 10.0, "took " + std::to_string(seconds) + " s");
  if (o.pass) {
    std::ostringstream d;
    d << fixtures << " fixtures, P=R=A=F1=1.0000 in " << std::fixed << std::setprecision(2) << seconds << " s";
    o.detail = d.str();
  }
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome worked_example() {
  Outcome o;
  const auto& s = fixture("counterbore_breakout");
  const Descriptor d = extract_descriptor(s.model, base_face(s, FeatureType::CounterboreHole), {});
  using enum Convexity;
  o.require(d.f_facetype == FaceType::Plan, "f_facetype");
  o.require(d.f_curvature == CurvatureClass::Flat, "f_curvature");
  o.require(d.ol.convexity == set_of({{FaceType::Cyli, Concave, 2}, {FaceType::Plan, Convex, 1}}),
            "ol_convexity = " + to_string(d.ol.convexity));
  o.require(d.il.convexity == set_of({{FaceType::Cyli, Convex, 2}}), "il_convexity = " + to_string(d.il.convexity));
  o.require(d.il.perpendicular == set_of({{FaceType::Cyli, Convex, 2}}),
            "il_perpendicular = " + to_string(d.il.perpendicular));
  o.require(d.ax_coaxial, "ax_coaxial");
  const SimilarityScore r = descriptor_similarity(template_for(FeatureType::CounterboreHole), d);
  o.require(r.r == 1.0, "R = " + std::to_string(r.r));
  for (const auto& [name, res] : r.per_item) o.require(res.score.s == 1, "S(" + name + ") = 0");
  if (o.pass) o.detail = "descriptor matches; R = 1.0 over " + std::to_string(r.active) + " items, all S_k = 1";
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome constraint_table() {
  Outcome o;
  ItemValueSet target;
  target.add(FaceType::Cyli, Convexity::Concave, 2);
  auto item = [](std::optional<int> mn, std::optional<int> mx, std::optional<int> eq) {
    TemplateItem t;
    auto v = [](int n) { return TemplateValue{std::vector<ItemValue>{{FaceType::Cyli, Convexity::Concave, n}}}; };
    if (mn) t.minimum = v(*mn);
    if (mx) t.maximum = v(*mx);
    if (eq) t.equal = v(*eq);
    return t;
  };
  struct Case {
    const char* name;
    TemplateItem t;
    int ConstraintScore::*field;
    int expected;
  };
  const std::vector<Case> cases = {
      {"min satisfied", item(2, {}, {}), &ConstraintScore::a_min, 1},
      {"min violated", item(3, {}, {}), &ConstraintScore::a_min, 0},
      {"min unspecified", item({}, 1, {}), &ConstraintScore::a_min, 1},
      {"max satisfied", item({}, 2, {}), &ConstraintScore::a_max, 1},
      {"max violated", item({}, 1, {}), &ConstraintScore::a_max, 0},
      {"max unspecified", item(3, {}, {}), &ConstraintScore::a_max, 1},
      {"equal satisfied", item({}, {}, 2), &ConstraintScore::a_equal, 1},
      {"equal violated", item({}, {}, 1), &ConstraintScore::a_equal, 0},
      {"equal unspecified", item(3, {}, {}), &ConstraintScore::a_equal, 1},
  };
  for (const Case& c : cases) {
    const ConstraintScore cs = constraint_scores(c.t, target);
    o.require(cs.*c.field == c.expected, c.name);
  }
  if (o.pass) o.detail = "9 of 9 cases";
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome any_aggregation() {
  Outcome o;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> n(0, 7), type(0, 4), conv(0, 1);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    ItemValueSet s;
    for (int i = n(rng); i > 0; --i) {
      const int c = n(rng);
      if (c > 0) s.add(static_cast<FaceType>(type(rng)), static_cast<Convexity>(conv(rng)), c);
    }
    for (Convexity c : {Convexity::Convex, Convexity::Concave}) {
      int sum = 0;
      for (const auto& [key, count] : s.entries()) sum += key.second == c ? count : 0;
      o.require(compare_magnitude({FaceType::Any, c, 1}, s) == sum, "trial " + std::to_string(trial));
    }
  }
  if (o.pass) o.detail = "1000 random item value sets";
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome weights() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(1e-4, 1e4);
  std::bernoulli_distribution pass(0.5);
  const Descriptor d = extract_descriptor(fixture("multi_feature_block").model, 1, {});
  const auto& items = descriptor_items();
  for (std::size_t active = 1; active <= items.size(); ++active) {
    for (int trial = 0; trial < 25; ++trial) {
      FeatureTemplate t;
      int satisfied = 0;
      for (std::size_t i = 0; i < active; ++i) {
        const std::string name(items[i].name);
        const bool ok = pass(rng);
        satisfied += ok;
        TemplateItem item;
        const ItemData actual = item_value(d, name);
        if (const auto* word = std::get_if<std::string>(&actual)) {
          item.equal = ok ? *word : std::string("MISMATCH");
        } else {
          item.maximum = std::vector<ItemValue>{{FaceType::Any, Convexity::Concave, ok ? 1000 : -1}};
        }
        t.items[name] = item;
      }
      const SimilarityScore u = descriptor_similarity(t, d);
      o.require(u.r == static_cast<double>(Rational(satisfied, static_cast<long long>(active))),
                "uniform R differs from " + std::to_string(satisfied) + "/" + std::to_string(active));
      WeightVector wv;
      for (const auto& [name, item] : t.items) wv.w[name] = w(rng);
      const SimilarityScore r = descriptor_similarity(t, d, &wv);
      double sum = 0;
      for (const auto& [name, res] : r.per_item) sum += res.weight;
      o.require(std::abs(sum - 1.0) <= 1e-12, "weights sum to " + std::to_string(sum));
    }
  }
  if (o.pass) o.detail = "1..20 active items, 25 weight draws each";
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome composite_priority() {
  Outcome o;
  for (const char* name : {"countersink_hole", "counterbore_one_cylinder", "counterbore_two_half"}) {
    const auto& s = fixture(name);
    const RecognitionResult r = recognize(s.model, default_library(), {}, {});
    int composites = 0;
    std::set<int> members;
    for (const FeatureInstance& i : r.instances) {
      if (!is_composite_hole(i.feature)) continue;
      ++composites;
      members.insert(i.members.begin(), i.members.end());
    }
    o.require(composites == 1, std::string(name) + ": " + std::to_string(composites) + " composite instances");
    for (int m : members) {
      for (FeatureType f : labels_on(r, m)) {
        o.require(!is_hole_family(f), std::string(name) + ": face " + std::to_string(m) + " keeps " +
                                          std::string(to_string(f)));
      }
    }
  }
  if (o.pass) o.detail = "one composite each, no simple or taper labels on members";
  return o;
}

// 7 -------------------------------------------------------------------------
/// Item names whose values differ outside CYLI entries.
std::vector<std::string> non_cylinder_differences(const Descriptor& a, const Descriptor& b) {
  std::vector<std::string> out;
  for (const ItemInfo& info : descriptor_items()) {
    const ItemData x = item_value(a, info.name), y = item_value(b, info.name);
    if (info.kind == ItemKind::Scalar) {
      if (x != y) out.emplace_back(info.name);
      continue;
    }
    const auto& sx = std::get<ItemValueSet>(x).entries();
    const auto& sy = std::get<ItemValueSet>(y).entries();
    std::set<ItemValueSet::Key> keys;
    for (const auto& [k, v] : sx) keys.insert(k);
    for (const auto& [k, v] : sy) keys.insert(k);
    for (const auto& k : keys) {
      const int cx = sx.count(k) ? sx.at(k) : 0, cy = sy.count(k) ? sy.at(k) : 0;
      if (cx != cy && k.first != FaceType::Cyli) out.emplace_back(info.name);
    }
  }
  return out;
}

Outcome representation() {
  Outcome o;
  const auto& one = fixture("simple_hole_one_cylinder");
  const auto& two = fixture("simple_hole_two_half");
  const RecognitionResult r = recognize(two.model, default_library(), {}, {});
  for (const TruthFeature& t : two.truth.features) {
    for (int f : t.base_faces) {
      o.require(labels_on(r, f) == std::set<FeatureType>{FeatureType::SimpleHole},
                "half face " + std::to_string(f) + " not a simple hole");
    }
  }
  // Pair faces by surface: planes by normal and offset, cylinders by radius.
  const GeomContext c1(one.model), c2(two.model);
  int compared = 0;
  for (const Face& f2 : two.model.faces()) {
    for (const Face& f1 : one.model.faces()) {
      bool same = false;
      if (const auto* p2 = std::get_if<Plane>(&f2.surface)) {
        if (const auto* p1 = std::get_if<Plane>(&f1.surface)) {
          same = distance(p1->normal, p2->normal) < 1e-9 &&
                 std::abs(dot(p1->normal, p1->origin) - dot(p2->normal, p2->origin)) < 1e-9;
        }
      } else if (std::holds_alternative<Cylinder>(f2.surface) && std::holds_alternative<Cylinder>(f1.surface)) {
        same = true;
      }
      if (!same) continue;
      ++compared;
      const auto diff = non_cylinder_differences(extract_descriptor(c1, f1.id, {}), extract_descriptor(c2, f2.id, {}));
      o.require(diff.empty(), "face " + std::to_string(f2.id) + " differs in " + (diff.empty() ? "" : diff.front()));
    }
  }
  o.require(compared == static_cast<int>(two.model.faces().size()), "unpaired faces");
  if (o.pass) o.detail = "recognized; " + std::to_string(compared) + " face pairs differ only in CYLI counts";
  return o;
}

// 8 -------------------------------------------------------------------------
Outcome pinned() {
  Outcome o;
  const auto& a = fixture("steep_frustum_passage");
  const RecognitionResult ra = recognize(a.model, default_library(), {}, {});
  const int base_a = a.truth.features.at(0).base_face;
  o.require(labels_on(ra, base_a) == std::set<FeatureType>{FeatureType::OpenedPocket}, "frustum base not opened pocket");
  o.require(!extract_descriptor(a.model, base_a, {}).ax_interference, "frustum base ax_interference TRUE");

  const auto& b = fixture("merged_slot_pocket_floor");
  const RecognitionResult rb = recognize(b.model, default_library(), {}, {});
  const int base_b = b.truth.features.at(0).base_face;
  o.require(labels_on(rb, base_b) == std::set<FeatureType>{FeatureType::SimpleSlot}, "merged floor not simple slot");
  if (o.pass) o.detail = "opened pocket (no interference) and simple slot";
  return o;
}

// 9 -------------------------------------------------------------------------
Model moved(const Model& m, const Vec3& axis, double angle, const Vec3& shift) {
  auto pt = [&](const Vec3& p) { return rotate(p, axis, angle) + shift; };
  std::vector<Vertex> vs;
  for (const Vertex& v : m.vertices()) vs.push_back({v.id, pt(v.point)});
  std::vector<Edge> es;
  for (Edge e : m.edges()) {
    if (auto* arc = std::get_if<CircularArc>(&e.curve)) {
      arc->center = pt(arc->center);
      arc->axis = rotate(arc->axis, axis, angle);
    }
    es.push_back(e);
  }
  std::vector<Face> fs;
  for (Face f : m.faces()) {
    f.surface = transform_surface(f.surface, axis, angle, shift);
    fs.push_back(f);
  }
  return Model(m.length_unit(), vs, es, fs, m.shells());
}

std::vector<int> predicate_signature(const Model& m) {
  const GeomContext ctx(m);
  std::vector<int> s;
  for (const Face& f : m.faces()) {
    for (LoopKind k : {LoopKind::Outer, LoopKind::Inner}) {
      for (const Adjacency& a : adjacent_faces(m, f.id, k)) {
        s.push_back(static_cast<int>(convexity(ctx, f.id, a.face_id, a.coedge)));
        s.push_back(static_cast<int>(continuity(ctx, f.id, a.face_id, a.coedge.edge_id)));
        s.push_back(static_cast<int>(
            angle_class(base_vector(ctx, f.id), base_vector(ctx, a.face_id), ctx.tolerances().angular)));
        s.push_back(coaxial(ctx, f.id, a.face_id));
      }
    }
  }
  return s;
}

Outcome geometric_properties() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), off(-1000, 1000);
  const std::vector<std::string> names = {"counterbore_breakout", "rotational_counterbore_fillet", "outer_fillet",
                                          "countersink_hole"};
  std::vector<std::vector<int>> base;
  for (const auto& n : names) base.push_back(predicate_signature(fixture(n).model));
  for (int trial = 0; trial < 100; ++trial) {
    Vec3 axis{g(rng), g(rng), g(rng)};
    if (norm(axis) < 1e-3) axis = {0, 0, 1};
    const std::size_t k = static_cast<std::size_t>(trial) % names.size();
    const Model m = moved(fixture(names[k]).model, normalized(axis), ang(rng), {off(rng), off(rng), off(rng)});
    o.require(predicate_signature(m) == base[k], "motion " + std::to_string(trial) + " on " + names[k]);
  }

  int pairs = 0;
  for (const SynthesizedModel& s : suite()) {
    const GeomContext ctx(s.model);
    for (const Face& f : s.model.faces()) {
      for (LoopKind k : {LoopKind::Outer, LoopKind::Inner}) {
        for (const Adjacency& a : adjacent_faces(s.model, f.id, k)) {
          const auto mate = mate_use(s.model, f.id, a.coedge);
          const Coedge& back = s.model.face(mate->face_id).loops[mate->loop_index].coedges[mate->coedge_index];
          ++pairs;
          o.require(convexity(ctx, f.id, a.face_id, a.coedge) == convexity(ctx, a.face_id, f.id, back),
                    s.name + ": asymmetric convexity");
        }
      }
    }
  }

  std::uniform_int_distribution<int> cls(0, kClassCount - 1), size(1, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    FaceLabels truth, pred;
    std::vector<std::pair<int, int>> raw;
    for (int i = size(rng); i > 0; --i) {
      const int t = cls(rng), p = std::bernoulli_distribution(0.5)(rng) ? t : cls(rng);
      auto as_set = [](int c) {
        return c == kNoneClass ? std::set<FeatureType>{} : std::set<FeatureType>{static_cast<FeatureType>(c)};
      };
      truth[i] = as_set(t);
      pred[i] = as_set(p);
      raw.emplace_back(t, p);
    }
    const Metrics m = metrics(confusion(truth, pred));
    Rational ps = 0, rs = 0, as = 0, fs = 0;
    int present = 0;
    for (int c = 0; c < kClassCount; ++c) {
      long long tp = 0, fp = 0, fn = 0, tn = 0;
      for (auto [t, p] : raw) {
        tp += t == c && p == c;
        fp += t != c && p == c;
        fn += t == c && p != c;
        tn += t != c && p != c;
      }
      if (tp + fn == 0) continue;
      ++present;
      const Rational pr = tp + fp ? Rational(tp, tp + fp) : Rational(0), rc(tp, tp + fn);
      ps += pr;
      rs += rc;
      as += Rational(tp + tn, tp + tn + fp + fn);
      if (pr + rc != 0) fs += 2 * pr * rc / (pr + rc);
    }
    const Rational k = present;
    o.require(m.precision == static_cast<double>(ps / k) && m.recall == static_cast<double>(rs / k) &&
                  m.accuracy == static_cast<double>(as / k) && m.f1 == static_cast<double>(fs / k),
              "metrics recount mismatch in trial " + std::to_string(trial));
  }
  if (o.pass) {
    o.detail = "100 rigid motions, " + std::to_string(pairs) + " symmetric pairs, 1000 metric recounts";
  }
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome step_ingestion() {
  Outcome o;
  const std::filesystem::path data(MFR_TEST_DATA);
  for (const char* name : {"cube", "counterbore"}) {
    const StepImport imp = import_step(data / (std::string(name) + ".step"));
    const Model json = load_model(data / (std::string(name) + ".model.json"));
    o.require(validate_topology(imp.model).empty(), std::string(name) + ": STEP model invalid");
    o.require(imp.model.faces().size() == json.faces().size(), std::string(name) + ": face count");
    const std::string a = result_to_json(recognize(imp.model, default_library(), {}, {}));
    const std::string b = result_to_json(recognize(json, default_library(), {}, {}));
    o.require(a == b, std::string(name) + ": recognition differs");
  }
  if (o.pass) o.detail = "cube and counterbore: valid, recognition identical to JSON";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"full-suite recognition", full_suite},
      {"counterbore worked example", worked_example},
      {"range-constraint table", constraint_table},
      {"ANY aggregation", any_aggregation},
      {"weight renormalization", weights},
      {"composite priority", composite_priority},
      {"hole representation robustness", representation},
      {"pinned misrecognitions", pinned},
      {"geometric property suite", geometric_properties},
      {"STEP ingestion", step_ingestion},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << i + 1 << "  " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
