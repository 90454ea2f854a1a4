#include "nudgek/error.hpp"

namespace nudgek {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonStochasticAlpha: return "NonStochasticAlpha";
    case ErrorKind::NotSubGenerator: return "NotSubGenerator";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidScv: return "InvalidScv";
    case ErrorKind::InvalidShape: return "InvalidShape";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::UnstableSystem: return "UnstableSystem";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ComplexDominantEigenvalue: return "ComplexDominantEigenvalue";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::MeanOrderViolation: return "MeanOrderViolation";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::InsufficientBatches: return "InsufficientBatches";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool Error::is_config_error() const noexcept {
  switch (kind_) {
    case ErrorKind::SingularResolvent:
    case ErrorKind::SingularMatrix:
    case ErrorKind::NonFinite:
    case ErrorKind::ComplexDominantEigenvalue:
    case ErrorKind::NotConverged:
    case ErrorKind::NumericalInconsistency:
      return false;
    default:
      return true;
  }
}

}  // namespace nudgek
