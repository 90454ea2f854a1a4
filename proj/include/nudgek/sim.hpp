#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nudgek/ccdf.hpp"
#include "nudgek/phase_type.hpp"
#include "nudgek/system.hpp"

namespace nudgek::sim {

using Rng = std::mt19937_64;

/// Rng for replication `stream` of a run with master seed `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Samples a phase-type law by simulating its CTMC phase by phase.
class PhaseSampler {
 public:
  explicit PhaseSampler(const PhaseType& ph);
  double operator()(Rng& rng) const;

 private:
  struct Phase {
    double rate = 0.0;
    std::vector<double> cumulative;  ///< next phase; last entry is absorption
  };
  std::vector<double> initial_;
  std::vector<Phase> phases_;
};

double ph_sample(const PhaseType& ph, Rng& rng);

struct Options {
  std::uint64_t arrivals = 1'000'000;
  std::uint64_t seed = 1;
  std::vector<double> t_points;
  double warmup_fraction = 0.1;
  int batches = 50;
  int replications = 1;
  int workers = 1;
  double confidence = 0.99;
  int queue_length_bins = 32;
};

struct Estimate {
  double value = 0.0;
  double half_width = 0.0;
  double std_error = 0.0;
};

struct SimStats {
  std::uint64_t n_arrivals = 0;  ///< arrivals counted after warm-up
  std::uint64_t n_type1 = 0;
  std::uint64_t n_type2 = 0;
  std::uint64_t seed = 0;
  int batches = 0;

  Estimate mean_response;
  Estimate mean_response1;
  Estimate mean_response2;
  Estimate mean_workload;  ///< workload seen by arrivals (time average by PASTA)
  Estimate swap_fraction_type2;

  std::vector<double> t_points;
  std::map<Law, std::vector<Estimate>> ccdf;
  /// Number in system seen by arrivals, P[N = q] for q < bins.
  std::vector<Estimate> queue_length_pmf;

  /// Exact sample-path sums over counted arrivals.
  double sum_response1 = 0.0;
  double sum_response2 = 0.0;
  double sum_workload = 0.0;

  unsigned max_passes = 0;         ///< most type-2 jobs passed by one type-1 job
  unsigned max_times_passed = 0;   ///< most passes suffered by one type-2 job
};

/// Discrete-event simulation of the Nudge-K M/PH/1 queue. Throws
/// UnstableSystem for lambda >= 1, InvalidArgument for fewer than 1e5
/// arrivals, InsufficientBatches for fewer than 30 batches.
SimStats simulate(const SystemConfig& cfg, const Options& options);

struct ValidationPoint {
  std::string name;
  double t = 0.0;
  double analytic = 0.0;
  Estimate estimate;
  double z = 0.0;        ///< (analytic - estimate) / std_error
  bool within = false;   ///< |analytic - estimate| <= tolerance * half_width
};

struct ValidationReport {
  std::vector<ValidationPoint> points;
  double pass_fraction = 0.0;
  bool pass = false;
};

/// Compares analytic ccdf curves against the simulated ones at the
/// simulation's t points. Throws GridMismatch if a curve uses other points.
ValidationReport validate(const std::vector<CcdfCurve>& analytic, const SimStats& stats,
                          double tolerance = 3.0, double required_fraction = 0.95);

/// Analytic Z, W1, W2, R1, R2 curves plus p_swap and E[R_Nudge-K] against
/// a simulation of `cfg`.
ValidationReport validate_system(const SystemConfig& cfg, const SimStats& stats,
                                 double tolerance = 3.0, double required_fraction = 0.95);

}  // namespace nudgek::sim
