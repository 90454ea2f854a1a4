#pragma once

#include <vector>

#include "nudgek/ccdf.hpp"
#include "nudgek/system.hpp"

namespace nudgek::nudge {

/// Largest finite depth accepted by the distribution routines; their matrix
/// sizes grow linearly (type 2) in K.
inline constexpr unsigned kMaxCurveDepth = 500;

/// Rate matrix M of the absorbing chain that decides whether a waiting
/// type-2 job gets passed; the swap probability is entry (0, absorbing).
struct SwapMatrix {
  Matrix rates;
  Index absorbing = 0;
};

/// Requires an effective depth >= 1 (depth 0 is plain FCFS).
SwapMatrix swap_matrix(const SystemConfig& cfg);

/// Probability that a type-2 job finding workload s is eventually passed.
double swap_prob_given_workload(const SystemConfig& cfg, double s);

/// Probability that a random type-2 job is passed by a type-1 job.
double p_swap(const SystemConfig& cfg);

/// E[R_Nudge-K] = E[R] + (1 - p) p_swap (E[X1] - E[X2]).
double mean_response(const SystemConfig& cfg);

ExpSumCcdf w2_law(const SystemConfig& cfg);
ExpSumCcdf r2_law(const SystemConfig& cfg);
CcdfCurve w2_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);
CcdfCurve r2_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);

/// Matrix-geometric FCFS queue length: P[Q = (q, i)] = (pi1 R^{q-1})_i.
struct FcfsQueueLength {
  RowVector pi1;
  Matrix rate;
};

FcfsQueueLength fcfs_qlen_geometric(const SystemConfig& cfg);

/// The FCFS queue-length law split according to how many type-2 jobs an
/// arriving type-1 job passes.
struct ReducedQueueLaw {
  RowVector pi0_1;  ///< reduced law Q1 at level 0
  RowVector pi1_1;  ///< reduced law Q1 at level 1 (levels q > 0 are pi1_1 R^{q-1})
  RowVector pi0_2;  ///< reduced law Q2 at level 0 (levels q are pi0_2 R^q)
  Matrix rate;
  RowVector pi1;
};

ReducedQueueLaw reduced_qlen(const SystemConfig& cfg);

ExpSumCcdf w1_law(const SystemConfig& cfg);
ExpSumCcdf r1_law(const SystemConfig& cfg);
CcdfCurve w1_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);
CcdfCurve r1_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);

/// p R1 + (1 - p) R2.
ExpSumCcdf response_law(const SystemConfig& cfg);

struct TailConstants {
  double theta_z = 0.0;
  double c_z = 0.0;
  double c_fcfs = 0.0;
  double c_w1 = 0.0;
  double c_r1 = 0.0;
  double c_w2 = 0.0;
  double c_r2 = 0.0;
};

TailConstants tail_constants(const SystemConfig& cfg);

struct TirCurve {
  CcdfCurve fcfs;
  CcdfCurve nudge;
  std::vector<double> tir;
};

/// TIR(t) = 1 - P[R_Nudge > t] / P[R_FCFS > t].
TirCurve tir_curve(const SystemConfig& cfg, const std::vector<double>& grid);

}  // namespace nudgek::nudge
