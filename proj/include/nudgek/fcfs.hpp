#pragma once

#include <vector>

#include "nudgek/ccdf.hpp"
#include "nudgek/numerics.hpp"
#include "nudgek/system.hpp"

namespace nudgek::fcfs {

/// T = S + lambda 1 alpha, the generator of the workload ccdf.
Matrix workload_generator(const SystemConfig& cfg);

/// P[Z > t] = lambda beta e^{T t} (-T)^{-1} 1 with beta = (1 - lambda) alpha.
ExpSumCcdf workload_law(const SystemConfig& cfg);

/// Evaluates the workload ccdf on `grid`; both closed forms are evaluated
/// and must agree to 1e-10 (NumericalInconsistency otherwise).
CcdfCurve workload_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);

struct WorkloadTail {
  numerics::SpectralInfo spectral;  ///< decay rate theta_Z and eigenvectors of T
  double c_z = 0.0;                 ///< lim e^{theta_Z t} P[Z > t]
  double laplace_mix = 0.0;         ///< S~(-theta_Z)
  double laplace1 = 0.0;            ///< S~_1(-theta_Z)
  double laplace2 = 0.0;            ///< S~_2(-theta_Z)

  double theta() const noexcept { return spectral.theta; }
};

/// Decay rate and prefactor of the workload. Also checks
/// S~(-theta_Z) == (lambda + theta_Z) / lambda and theta_Z < theta_i for
/// every job type that occurs.
WorkloadTail spectral(const SystemConfig& cfg);

/// (1 - lambda) alpha e^{S t} 1 + lambda (beta, 0) e^{U t} [(-T)^{-1} 1; 1].
ExpSumCcdf response_law(const SystemConfig& cfg);

struct ResponseResult {
  CcdfCurve curve;
  double c_fcfs = 0.0;
};

ResponseResult response_ccdf(const SystemConfig& cfg, const std::vector<double>& grid);

struct Means {
  double response = 0.0;  ///< E[R] = 1 + lambda E[X^2] / (2 (1 - lambda))
  double workload = 0.0;  ///< E[Z]
};

/// Both E[R] forms are computed and must agree to 1e-10.
Means means(const SystemConfig& cfg);

}  // namespace nudgek::fcfs
