#pragma once

#include <stdexcept>
#include <string>

namespace mfr {

/// Base class of every domain error raised by the engine. The CLI maps these
/// to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MFR_DEFINE_ERROR(Name)              \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

MFR_DEFINE_ERROR(SchemaError);
MFR_DEFINE_ERROR(TopologyError);
MFR_DEFINE_ERROR(UnknownFace);
MFR_DEFINE_ERROR(NotAdjacent);
MFR_DEFINE_ERROR(ZeroVector);
MFR_DEFINE_ERROR(DanglingReference);
MFR_DEFINE_ERROR(UnsupportedEntity);
MFR_DEFINE_ERROR(WeightSumError);
MFR_DEFINE_ERROR(NoActiveItems);
MFR_DEFINE_ERROR(InvalidDimensions);
MFR_DEFINE_ERROR(PlacementError);
MFR_DEFINE_ERROR(FaceSetMismatch);
MFR_DEFINE_ERROR(EmptyMatrix);

#undef MFR_DEFINE_ERROR

/// Part 21 syntax error with a 1-based source position.
class StepSyntaxError : public Error {
 public:
  StepSyntaxError(const std::string& what, int line, int column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace mfr
