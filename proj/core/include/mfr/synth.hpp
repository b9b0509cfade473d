#pragma once

// Parametric fixture generator: cuboid and rotational stock with 2.5D
// features built by direct face construction, plus ground-truth labels.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mfr/brep.hpp"
#include "mfr/evaluation.hpp"
#include "mfr/templates.hpp"

namespace mfr {

enum class HoleRepresentation { OneCylinder, TwoHalfCylinders };

std::string_view to_string(HoleRepresentation r);

/// Axis-aligned block [0,w] x [0,l] x [0,h].
struct CuboidStock {
  double w = 100, l = 80, h = 40;
};

/// Cylinder about +z through the origin, base at z = 0.
struct RotationalStock {
  double radius = 30, height = 60;
  bool split_wall = false;  // two half-cylinder wall faces instead of one
};

using StockSpec = std::variant<CuboidStock, RotationalStock>;

/// One feature cut into the stock. Interior features sit on the top face at
/// (x, y); edge features (fillets, chamfers, channels, notches, breakouts)
/// use `variant` and `dims` to select their geometry.
struct FeatureSpec {
  FeatureType feature = FeatureType::SimpleHole;
  double x = 0, y = 0;
  std::map<std::string, double> dims;
  HoleRepresentation representation = HoleRepresentation::OneCylinder;
  std::string variant;  // e.g. "breakout", "channel", "notch", "frustum", "merged_slot"
};

struct PartSpec {
  StockSpec stock;
  std::vector<FeatureSpec> features;
};

struct SynthesizedModel {
  std::string name;
  Model model;
  Truth truth;
  PartSpec part;
  /// Fixtures reproducing a documented misrecognition: the labels the
  /// engine is expected to emit on the truth base faces.
  bool pinned_failure = false;
  std::set<FeatureType> expected_labels;
};

/// Throws InvalidDimensions for non-positive sizes.
Model make_stock(const StockSpec& stock);

/// Builds the part from scratch. Throws InvalidDimensions / PlacementError.
SynthesizedModel build_part(const PartSpec& part, const std::string& name = "part");

/// Adds a feature to a synthesized part (regenerating it), or to a bare stock
/// model produced by make_stock.
SynthesizedModel apply_feature(const SynthesizedModel& base, const FeatureSpec& spec);
SynthesizedModel apply_feature(const Model& stock, const FeatureSpec& spec);

/// Default single-feature fixture for one subtype (dims overridable).
PartSpec default_part(FeatureType f);

/// Fixtures covering every subtype, both hole representations, both stock
/// kinds, a multi-feature block and the two pinned misrecognitions.
std::vector<SynthesizedModel> standard_suite();

/// Writes model and truth JSON plus a manifest line per fixture.
void write_suite(const std::vector<SynthesizedModel>& suite, const std::filesystem::path& dir);

}  // namespace mfr
