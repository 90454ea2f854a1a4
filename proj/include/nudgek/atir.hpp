#pragma once

#include <map>

#include "nudgek/fcfs.hpp"
#include "nudgek/system.hpp"

namespace nudgek::atir {

/// ATIR(K) = 1 - lim P[R_Nudge-K > t] / P[R_FCFS > t], closed form in the
/// Laplace transforms at -theta_Z. The depth in `cfg` is ignored.
double atir(const SystemConfig& cfg, SwapDepth depth);
double atir(const fcfs::WorkloadTail& tail, double p, SwapDepth depth);

/// Weights w1 = p S~1/S~ and w = (1-p)/S~ at -theta_Z.
struct Weights {
  double w1 = 0.0;
  double w = 0.0;
};
Weights weights(const fcfs::WorkloadTail& tail, double p);

/// Real-valued maximiser before flooring:
/// log(S~1 (S~2 - 1) / (S~2 (S~1 - 1))) / log S~.
double k_opt_real(const fcfs::WorkloadTail& tail);
/// Integer maximiser of ATIR(K); ties go to the smaller K.
unsigned k_opt(const SystemConfig& cfg);
unsigned k_opt(const fcfs::WorkloadTail& tail, double p);

/// ATIR(K + 1) - ATIR(K).
double delta_atir(const SystemConfig& cfg, unsigned depth);
double delta_atir(const fcfs::WorkloadTail& tail, double p, unsigned depth);

struct Positivity {
  bool for_k = false;
  bool for_k1 = false;
  bool for_all_k = false;
  double ratio = 0.0;  ///< (1 - 1/S~2) / (1 - 1/S~1)
};

Positivity positivity_conditions(const SystemConfig& cfg, SwapDepth depth);

struct HeavyTraffic {
  long k_approx = 0;           ///< floor(log(E[X2]/E[X1]) E[X^2] / (2 (1 - lambda)))
  long k_approx_workload = 0;  ///< floor(log(E[X2]/E[X1]) E[Z])
  double kingman_theta = 0.0;
};

/// Throws MeanOrderViolation when E[X2] < E[X1].
HeavyTraffic heavy_traffic_k(const SystemConfig& cfg);

struct AtirReport {
  Weights weights;
  std::map<unsigned, double> atir_by_k;
  double atir_infinite = 0.0;
  unsigned k_opt = 0;
  Positivity conditions;
};

/// ATIR for K = 0..max_k and infinity, plus K_opt and the positivity test
/// for the configured depth.
AtirReport report(const SystemConfig& cfg, unsigned max_k);

}  // namespace nudgek::atir
