#pragma once

// ISO 10303-21 (STEP physical file) reader and writer for the analytic B-rep
// subset used by the engine.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mfr/brep.hpp"

namespace mfr {

struct StepValue;

struct StepUnset {};    // $
struct StepDerived {};  // *
struct StepRef {
  int id = 0;
};
struct StepEnum {
  std::string name;  // without the dots
};
/// Parenthesised list; `keyword` is set for typed parameters such as
/// LENGTH_MEASURE(1.0).
struct StepList {
  std::string keyword;
  std::vector<StepValue> items;
};

struct StepValue {
  std::variant<StepUnset, StepDerived, std::string, double, long long, StepRef, StepEnum, StepList> v;
};

struct StepEntity {
  int id = 0;
  /// Keyword of a simple record; complex (multi-record) instances use the
  /// first record's keyword and keep every record in `records`.
  std::string keyword;
  std::vector<StepValue> args;
  std::vector<StepList> records;
  int line = 0;
};

struct StepFile {
  std::vector<StepList> header;
  std::map<int, StepEntity> entities;
};

/// Instance ids referenced by an entity, in argument order.
std::vector<int> step_references(const StepEntity& e);

/// Throws StepSyntaxError (with line and column) and DanglingReference.
StepFile parse_step(std::string_view text);
StepFile read_step(const std::filesystem::path& path);

struct StepImport {
  Model model;
  std::vector<std::string> diagnostics;  // warnings: ignored entities, promoted loops
};

/// Maps the supported entity subset onto a Model. Faces are numbered in
/// CLOSED_SHELL order. Throws UnsupportedEntity and TopologyError.
StepImport step_to_model(const StepFile& file);
StepImport import_step(const std::filesystem::path& path);

/// Physical file for the model using only the supported subset.
std::string model_to_step(const Model& m, const std::string& name = "part");

}  // namespace mfr
