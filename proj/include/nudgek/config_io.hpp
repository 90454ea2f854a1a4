#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nudgek/system.hpp"

namespace nudgek {

/// Parsed JSON configuration. Shapes are templates whose means are fixed by
/// `ratio`; without a ratio they are used verbatim and must give E[X] = 1.
struct ConfigSpec {
  double lambda = 0.0;
  double p = 0.0;
  std::optional<double> ratio;
  PhaseType shape1 = ph::expo(1.0);
  PhaseType shape2 = ph::expo(1.0);
  SwapDepth depth;

  SystemConfig build() const;
  /// Same shapes with another load, mean ratio and type-1 fraction.
  SystemConfig build(double lambda, double ratio, double p) const;
};

/// Schema: {lambda, p, ratio, type1: {dist, ...}, type2: {dist, ...}, K}
/// with dist one of expo, erlang(phases), h2_balanced(scv),
/// h2_shape(scv, f), ph(alpha, S). Throws Error(ConfigError) on bad input.
ConfigSpec parse_config(std::string_view json_text);
ConfigSpec load_config(const std::string& path);

}  // namespace nudgek
