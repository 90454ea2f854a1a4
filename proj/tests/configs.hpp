#pragma once

#include "nudgek/system.hpp"

namespace testcfg {

using nudgek::SwapDepth;
using nudgek::SystemConfig;
namespace ph = nudgek::ph;

// expo/expo, lambda 3/4, p 1/2, E[X2]/E[X1] = 2
inline SystemConfig cfg_a(SwapDepth k = SwapDepth(2)) {
  return nudgek::normalize_system(0.75, 0.5, ph::expo(1.0), ph::expo(1.0), 2.0, k);
}

// as cfg_a with E[X2]/E[X1] = 3/2
inline SystemConfig cfg_b(SwapDepth k = SwapDepth(1)) {
  return nudgek::normalize_system(0.75, 0.5, ph::expo(1.0), ph::expo(1.0), 1.5, k);
}

// expo / two-phase hyperexponential (scv 2, f 0.9), lambda 0.7, p 0.7, ratio 1.2
inline SystemConfig cfg_c(SwapDepth k = SwapDepth(1)) {
  return nudgek::normalize_system(0.7, 0.7, ph::expo(1.0), ph::h2_shape(1.0, 2.0, 0.9), 1.2, k);
}

inline SystemConfig mm1(double lambda = 0.75) {
  return SystemConfig(lambda, 1.0, ph::expo(1.0), ph::expo(1.0), SwapDepth(0));
}

}  // namespace testcfg
