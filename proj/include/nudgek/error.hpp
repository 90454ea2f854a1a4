#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nudgek {

enum class ErrorKind {
  NonStochasticAlpha,
  NotSubGenerator,
  DimensionMismatch,
  InvalidScv,
  InvalidShape,
  InvalidArgument,
  SingularResolvent,
  SingularMatrix,
  UnstableSystem,
  NonFinite,
  ComplexDominantEigenvalue,
  NotConverged,
  NumericalInconsistency,
  MeanOrderViolation,
  DepthTooLarge,
  InsufficientBatches,
  GridMismatch,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers map
/// failures onto exit codes or test expectations.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by bad input rather than by the numerics.
  bool is_config_error() const noexcept;

 private:
  ErrorKind kind_;
};

}  // namespace nudgek
