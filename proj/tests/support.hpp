#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mfr/descriptor.hpp"
#include "mfr/synth.hpp"

namespace mfr::test {

inline std::filesystem::path data_path(std::string_view file) { return std::filesystem::path(MFR_TEST_DATA) / file; }

inline const std::vector<SynthesizedModel>& suite() {
  static const std::vector<SynthesizedModel> s = standard_suite();
  return s;
}

inline const SynthesizedModel& fixture(std::string_view name) {
  for (const SynthesizedModel& s : suite()) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no fixture " + std::string(name));
}

/// Base face of the first truth feature of the given type.
inline int base_face(const SynthesizedModel& s, FeatureType f) {
  for (const TruthFeature& t : s.truth.features) {
    if (t.feature == f) return t.base_face;
  }
  throw std::out_of_range("fixture " + s.name + " has no " + std::string(to_string(f)));
}

/// Scratch directory unique to the calling test.
inline std::filesystem::path scratch_dir(std::string_view name) {
  auto p = std::filesystem::temp_directory_path() / ("mfr_test_" + std::string(name));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace mfr::test
