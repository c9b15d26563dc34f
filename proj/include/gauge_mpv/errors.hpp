#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gauge_mpv {

enum class ErrorKind {
  NonAssociative,
  NoIdentity,
  MissingInverse,
  NotARep,
  NonUnitary,
  GroupMismatch,
  IncompleteCatalog,
  MultiplierMismatch,
  SizeLimit,
  DimMismatch,
  NumericalDegeneracy,
  NotEquivalent,
  GaugeNotFound,
  NotInCF,
  NotNormal,
  ExtractionDegenerate,
  NotDecomposable,
  BadAlgebra,
  ZeroByWignerEckart,
  MixedCohomology,
  BadSpinSet,
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gauge_mpv
