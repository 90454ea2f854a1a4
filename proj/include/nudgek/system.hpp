#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nudgek/phase_type.hpp"

namespace nudgek {

/// Maximum number of type-2 jobs an arriving type-1 job may pass. Either a
/// finite count or infinity.
class SwapDepth {
 public:
  constexpr SwapDepth() = default;
  constexpr explicit SwapDepth(unsigned depth) : depth_(depth) {}
  static constexpr SwapDepth infinite() {
    SwapDepth d;
    d.depth_.reset();
    return d;
  }

  /// Accepts a non-negative integer or "inf".
  static SwapDepth parse(std::string_view text);

  constexpr bool is_infinite() const noexcept { return !depth_.has_value(); }
  /// Finite depth; throws InvalidArgument when infinite.
  unsigned value() const;
  std::string to_string() const;

  friend constexpr bool operator==(const SwapDepth&, const SwapDepth&) = default;

 private:
  std::optional<unsigned> depth_{0U};
};

/// M/PH/1 queue with two job types under Nudge-K, time scaled so E[X] = 1.
class SystemConfig {
 public:
  /// Throws UnstableSystem (lambda outside (0,1)), InvalidArgument (p outside
  /// [0,1]) or ConfigError (E[X] != 1 within 1e-12).
  SystemConfig(double lambda, double p, PhaseType type1, PhaseType type2, SwapDepth depth);

  double lambda() const noexcept { return lambda_; }
  double p() const noexcept { return p_; }
  const PhaseType& type1() const noexcept { return type1_; }
  const PhaseType& type2() const noexcept { return type2_; }
  SwapDepth depth() const noexcept { return depth_; }
  /// X = p X1 + (1-p) X2 as one phase-type law with n1 + n2 phases.
  const PhaseType& mixture() const noexcept { return mixture_; }

  /// Configured depth, or zero when only one job type occurs (p == 0 or 1).
  SwapDepth effective_depth() const noexcept;

  SystemConfig with_depth(SwapDepth depth) const;
  SystemConfig with_lambda(double lambda) const;

 private:
  double lambda_;
  double p_;
  PhaseType type1_;
  PhaseType type2_;
  SwapDepth depth_;
  PhaseType mixture_;
};

/// Rescales both shapes so E[X1] = 1 / (p + (1-p) ratio) and
/// E[X2] = ratio * E[X1], hence E[X] = 1.
SystemConfig normalize_system(double lambda, double p, const PhaseType& shape1,
                              const PhaseType& shape2, double ratio, SwapDepth depth);

}  // namespace nudgek
