#include "cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mfr/config.hpp"
#include "mfr/errors.hpp"
#include "mfr/evaluation.hpp"
#include "mfr/io_util.hpp"
#include "mfr/recognizer.hpp"
#include "mfr/step.hpp"
#include "mfr/synth.hpp"

namespace mfr {

namespace {

struct Options {
  std::string config_path;
  std::string templates_path;
  EngineConfig config;
  std::optional<TemplateLibrary> library;

  const TemplateLibrary& templates() {
    if (!library) library = templates_path.empty() ? default_library() : load_templates(templates_path);
    return *library;
  }
};

bool is_step_path(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".step" || ext == ".stp" || ext == ".p21";
}

Model load_any_model(const std::filesystem::path& p, std::ostream& err) {
  if (!is_step_path(p)) return load_model(p);
  StepImport imp = import_step(p);
  for (const std::string& d : imp.diagnostics) err << "warning: " << p.string() << ": " << d << "\n";
  return std::move(imp.model);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_text_file(path, text);
  }
}

/// `--params k=v` overrides on top of the subtype's default part.
PartSpec part_from_params(FeatureType f, const std::vector<std::string>& params) {
  PartSpec part = default_part(f);
  FeatureSpec& spec = part.features.at(0);
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--params", "expected key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "representation") {
      if (value == "one_cylinder") {
        spec.representation = HoleRepresentation::OneCylinder;
      } else if (value == "two_half_cylinders") {
        spec.representation = HoleRepresentation::TwoHalfCylinders;
      } else {
        throw CLI::ValidationError("--params", "representation must be one_cylinder or two_half_cylinders");
      }
      continue;
    }
    if (key == "variant") {
      spec.variant = value;
      continue;
    }
    if (key == "stock") {
      if (value == "cuboid") {
        part.stock = CuboidStock{};
      } else if (value == "rotational") {
        part.stock = RotationalStock{};
      } else {
        throw CLI::ValidationError("--params", "stock must be cuboid or rotational");
      }
      continue;
    }
    double num = 0;
    try {
      std::size_t used = 0;
      num = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--params", "value of '" + key + "' is not a number");
    }
    if (key == "x") {
      spec.x = num;
    } else if (key == "y") {
      spec.y = num;
    } else if (key.rfind("stock.", 0) == 0) {
      const std::string field = key.substr(6);
      if (auto* c = std::get_if<CuboidStock>(&part.stock)) {
        if (field == "w") c->w = num;
        else if (field == "l") c->l = num;
        else if (field == "h") c->h = num;
        else throw CLI::ValidationError("--params", "cuboid stock has no field '" + field + "'");
      } else {
        auto& r = std::get<RotationalStock>(part.stock);
        if (field == "radius") r.radius = num;
        else if (field == "height") r.height = num;
        else if (field == "split_wall") r.split_wall = num != 0;
        else throw CLI::ValidationError("--params", "rotational stock has no field '" + field + "'");
      }
    } else {
      spec.dims[key] = num;
    }
  }
  return part;
}

FaceLabels predicted_labels(const std::string& path) {
  FaceLabels out;
  for (const auto& [id, labels] : labels_from_result_json(read_text_file(path))) out[id] = labels;
  return out;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Machining feature recognition on analytic B-rep models"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON file with conditions, tolerances and recognition settings")
      ->check(CLI::ExistingFile);

  // generate
  auto* gen = app.add_subcommand("generate", "Synthesize a fixture or the standard suite");
  std::string feature_name, model_out, truth_out, suite_name, out_dir;
  std::vector<std::string> params;
  gen->add_option("--feature", feature_name, "Feature subtype, e.g. simple_hole");
  gen->add_option("--params", params, "Overrides as key=value (dims, x, y, representation, variant, stock.*)");
  gen->add_option("--out", model_out, "Model JSON output");
  gen->add_option("--truth", truth_out, "Truth JSON output");
  gen->add_option("--suite", suite_name, "Named suite to write")->check(CLI::IsMember({"standard"}));
  gen->add_option("--out-dir", out_dir, "Directory for --suite output");

  // ingest-step
  auto* ingest = app.add_subcommand("ingest-step", "Convert a STEP file to model JSON");
  std::string step_in, ingest_out;
  ingest->add_option("--in", step_in, "STEP physical file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Model JSON output (default: stdout)");

  // describe
  auto* describe = app.add_subcommand("describe", "Print one face's descriptor");
  std::string model_path;
  int face_id = 0;
  bool as_json = false, unfolded = false;
  describe->add_option("--model", model_path, "Model JSON or STEP file")->required()->check(CLI::ExistingFile);
  describe->add_option("--face", face_id, "Face id")->required();
  describe->add_flag("--json", as_json, "Print JSON instead of text");
  describe->add_flag("--unfolded", unfolded, "Keep signed angle classes");

  // recognize
  auto* recognize_cmd = app.add_subcommand("recognize", "Label every face of a model");
  std::string result_out;
  recognize_cmd->add_option("--model", model_path, "Model JSON or STEP file")->required()->check(CLI::ExistingFile);
  recognize_cmd->add_option("--out", result_out, "Result JSON output (default: stdout)");
  recognize_cmd->add_option("--templates", opt.templates_path, "Template library JSON")->check(CLI::ExistingFile);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Confusion matrix and metrics over prediction/truth pairs");
  std::vector<std::string> preds, truths;
  std::string report_out, csv_out;
  evaluate->add_option("--pred", preds, "Recognition result JSON (repeatable)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", truths, "Truth JSON, paired with --pred in order")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", report_out, "Report JSON output (default: stdout)");
  evaluate->add_option("--csv", csv_out, "Confusion matrix CSV output");

  // templates validate
  auto* templates = app.add_subcommand("templates", "Template library tools");
  templates->require_subcommand(1);
  auto* validate_cmd = templates->add_subcommand("validate", "Parse and check a template library");
  std::string templates_file;
  validate_cmd->add_option("--file", templates_file, "Template library JSON (default: built-in)")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage_out, usage_err;
    const int code = app.exit(e, usage_out, usage_err);
    out << usage_out.str();
    err << usage_err.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (!opt.config_path.empty()) opt.config = load_config(opt.config_path);
    const EngineConfig& cfg = opt.config;

    if (*gen) {
      if (!suite_name.empty()) {
        if (out_dir.empty()) throw CLI::ValidationError("--out-dir", "required with --suite");
        const auto suite = standard_suite();
        write_suite(suite, out_dir);
        out << "wrote " << suite.size() << " fixtures to " << out_dir << "\n";
      } else {
        if (feature_name.empty() || model_out.empty()) {
          throw CLI::ValidationError("generate", "needs --feature and --out, or --suite and --out-dir");
        }
        std::optional<FeatureType> f;
        try {
          f = feature_from_string(feature_name);
        } catch (const Error&) {
          throw CLI::ValidationError("--feature", "unknown feature '" + feature_name + "'");
        }
        const SynthesizedModel s = build_part(part_from_params(*f, params), feature_name);
        save_model(s.model, model_out);
        if (!truth_out.empty()) write_text_file(truth_out, truth_to_json(s.truth));
        out << "wrote " << model_out << " (" << s.model.faces().size() << " faces)\n";
      }
    } else if (*ingest) {
      const Model m = load_any_model(step_in, err);
      emit(ingest_out, model_to_json(m), out);
    } else if (*describe) {
      const Model m = load_any_model(model_path, err);
      const GeomContext ctx(m, cfg.tolerances);
      const Descriptor d = extract_descriptor(ctx, face_id, cfg.conditions, !unfolded);
      out << (as_json ? descriptor_to_json(d) : descriptor_to_text(d));
      if (as_json) out << "\n";
    } else if (*recognize_cmd) {
      const Model m = load_any_model(model_path, err);
      const RecognitionResult r = recognize(m, opt.templates(), cfg.conditions, cfg.recognition, cfg.tolerances);
      emit(result_out, result_to_json(r), out);
    } else if (*evaluate) {
      if (preds.size() != truths.size()) {
        throw CLI::ValidationError("evaluate", "--pred and --truth must be given the same number of times");
      }
      ConfusionMatrix cm;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const FaceLabels truth = truth_labels(truth_from_json(read_text_file(truths[i])));
        try {
          cm += confusion(truth, predicted_labels(preds[i]));
        } catch (const FaceSetMismatch& e) {
          throw FaceSetMismatch(preds[i] + " vs " + truths[i] + ": " + e.what());
        }
      }
      emit(report_out, metrics_report_json(cm, metrics(cm)), out);
      if (!csv_out.empty()) write_text_file(csv_out, confusion_csv(cm));
    } else if (*validate_cmd) {
      const TemplateLibrary lib = templates_file.empty() ? default_library() : load_templates(templates_file);
      std::set<FeatureType> covered;
      for (const FeatureTemplate& t : lib.templates) covered.insert(t.feature);
      out << "template library " << lib.version << ": " << lib.templates.size() << " templates, "
          << covered.size() << " of " << all_features().size() << " subtypes\n";
      for (FeatureType f : all_features()) {
        if (!covered.count(f)) err << "warning: no template for " << to_string(f) << "\n";
      }
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace mfr
