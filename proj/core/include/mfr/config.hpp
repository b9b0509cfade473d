#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mfr/descriptor.hpp"
#include "mfr/geom.hpp"
#include "mfr/similarity.hpp"

namespace mfr {

/// `{conditions:{...}, tolerances:{...}, recognition:{threshold}}`; absent
/// blocks and fields keep their defaults.
struct EngineConfig {
  MachiningConditions conditions;
  Tolerances tolerances;
  RecognitionConfig recognition;
};

/// Throws SchemaError on malformed or out-of-range values.
EngineConfig parse_config(std::string_view json_text);
EngineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const EngineConfig& c);

}  // namespace mfr
