#include "nudgek/atir.hpp"

#include <cmath>
#include <limits>

#include "nudgek/error.hpp"

namespace nudgek::atir {
namespace {

bool single_type(double p) { return p <= 0.0 || p >= 1.0; }

}  // namespace

Weights weights(const fcfs::WorkloadTail& tail, double p) {
  return {p * tail.laplace1 / tail.laplace_mix, (1.0 - p) / tail.laplace_mix};
}

double atir(const fcfs::WorkloadTail& tail, double p, SwapDepth depth) {
  if (single_type(p) || depth == SwapDepth(0)) return 0.0;
  const auto [w1, w] = weights(tail, p);
  const double w_k = depth.is_infinite() ? 0.0 : std::pow(w, depth.value());
  const double keep = depth.is_infinite() ? 0.0 : std::pow(1.0 - p, depth.value());
  return w1 * (tail.laplace2 - 1.0) * w * (1.0 - w_k) / (1.0 - w) -
         (1.0 - w1) * (tail.laplace1 - 1.0) * (1.0 - keep);
}

double atir(const SystemConfig& cfg, SwapDepth depth) { return atir(fcfs::spectral(cfg), cfg.p(), depth); }

double k_opt_real(const fcfs::WorkloadTail& tail) {
  const double s1 = tail.laplace1;
  const double s2 = tail.laplace2;
  return std::log(s1 * (s2 - 1.0) / (s2 * (s1 - 1.0))) / std::log(tail.laplace_mix);
}

unsigned k_opt(const fcfs::WorkloadTail& tail, double p) {
  if (single_type(p)) return 0;
  // ATIR(K+1) > ATIR(K) iff K < x - 1, so the maximiser is ceil(x - 1); an x
  // within the guard of an integer m is a tie between m - 1 and m.
  const double x = k_opt_real(tail);
  if (!std::isfinite(x)) {
    if (x > 0.0) return std::numeric_limits<unsigned>::max();
    return 0;
  }
  const double guard = 1e-12 * std::max(1.0, std::abs(x));
  const double k = std::ceil(x - 1.0 - guard);
  if (k <= 0.0) return 0;
  if (k >= static_cast<double>(std::numeric_limits<unsigned>::max()))
    return std::numeric_limits<unsigned>::max();
  return static_cast<unsigned>(k);
}

unsigned k_opt(const SystemConfig& cfg) { return k_opt(fcfs::spectral(cfg), cfg.p()); }

double delta_atir(const fcfs::WorkloadTail& tail, double p, unsigned depth) {
  if (single_type(p)) return 0.0;
  const auto [w1, w] = weights(tail, p);
  return w1 * (tail.laplace2 - 1.0) * std::pow(w, depth + 1.0) -
         p * (1.0 - w1) * (tail.laplace1 - 1.0) * std::pow(1.0 - p, static_cast<double>(depth));
}

double delta_atir(const SystemConfig& cfg, unsigned depth) {
  return delta_atir(fcfs::spectral(cfg), cfg.p(), depth);
}

Positivity positivity_conditions(const SystemConfig& cfg, SwapDepth depth) {
  const auto tail = fcfs::spectral(cfg);
  const double lambda = cfg.lambda();
  const double p = cfg.p();
  const double theta = tail.theta();
  Positivity out;
  if (single_type(p)) return out;
  out.ratio = (1.0 - 1.0 / tail.laplace2) / (1.0 - 1.0 / tail.laplace1);
  const double all_k_bound = 1.0 + theta / (lambda * p);
  out.for_k1 = out.ratio > 1.0 + theta / lambda;
  out.for_all_k = out.ratio > all_k_bound;
  if (depth.is_infinite()) {
    out.for_k = out.for_all_k;
  } else if (depth.value() == 0) {
    out.for_k = false;
  } else {
    const double k = depth.value();
    const double w = lambda * (1.0 - p) / (lambda + theta);
    out.for_k = out.ratio > all_k_bound * (1.0 - std::pow(1.0 - p, k)) / (1.0 - std::pow(w, k));
  }
  return out;
}

HeavyTraffic heavy_traffic_k(const SystemConfig& cfg) {
  const double m1 = cfg.type1().mean();
  const double m2 = cfg.type2().mean();
  if (m2 < m1)
    throw Error(ErrorKind::MeanOrderViolation, "heavy-traffic K_opt needs E[X2] >= E[X1]");
  const double lambda = cfg.lambda();
  const double p = cfg.p();
  const double second = cfg.mixture().moment(2);
  const double log_ratio = std::log(m2 / m1);
  const auto means = fcfs::means(cfg);
  HeavyTraffic out;
  out.k_approx = static_cast<long>(std::floor(log_ratio * second / (2.0 * (1.0 - lambda))));
  out.k_approx_workload = static_cast<long>(std::floor(log_ratio * means.workload));
  const double second_mix = p * cfg.type1().moment(2) + (1.0 - p) * cfg.type2().moment(2);
  out.kingman_theta = 2.0 * (1.0 / lambda - 1.0) / (1.0 / (lambda * lambda) + second_mix - 1.0);
  return out;
}

AtirReport report(const SystemConfig& cfg, unsigned max_k) {
  const auto tail = fcfs::spectral(cfg);
  const double p = cfg.p();
  AtirReport out;
  if (!single_type(p)) out.weights = weights(tail, p);
  for (unsigned k = 0; k <= max_k; ++k) out.atir_by_k[k] = atir(tail, p, SwapDepth(k));
  out.atir_infinite = atir(tail, p, SwapDepth::infinite());
  out.k_opt = k_opt(tail, p);
  out.conditions = positivity_conditions(cfg, cfg.depth());
  return out;
}

}  // namespace nudgek::atir
