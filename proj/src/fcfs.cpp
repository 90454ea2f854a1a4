#include "nudgek/fcfs.hpp"

#include <cmath>
#include <limits>

#include "nudgek/error.hpp"

namespace nudgek::fcfs {
namespace {

constexpr double kDualFormTol = 1e-10;

Vector ones(Index n) { return Vector::Ones(n); }

// Laplace transform at -theta, or NaN when the job type cannot occur and its
// transform diverges there.
double laplace_or_nan(const PhaseType& ph, double theta) {
  if (theta < ph.decay_rate()) return ph.laplace(-theta);
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Matrix workload_generator(const SystemConfig& cfg) {
  const PhaseType& x = cfg.mixture();
  return x.generator() + cfg.lambda() * ones(x.order()) * x.alpha();
}

ExpSumCcdf workload_law(const SystemConfig& cfg) {
  const PhaseType& x = cfg.mixture();
  const double lambda = cfg.lambda();
  const Matrix t = workload_generator(cfg);
  const RowVector beta = (1.0 - lambda) * x.alpha();
  ExpTerm term{lambda * beta, t, (-t).partialPivLu().solve(ones(x.order())), 1.0};
  return ExpSumCcdf({std::move(term)});
}

CcdfCurve workload_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  const PhaseType& x = cfg.mixture();
  const double lambda = cfg.lambda();
  const ExpSumCcdf primary = workload_law(cfg);
  // lambda alpha e^{T t} (-S)^{-1} 1
  const ExpSumCcdf alternate({ExpTerm{lambda * x.alpha(), workload_generator(cfg),
                                      (-x.generator()).partialPivLu().solve(ones(x.order())), 1.0}});
  CcdfCurve curve{Law::Workload, grid, primary.evaluate(grid)};
  const auto check = alternate.evaluate(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(curve.values[i] - check[i]) > kDualFormTol)
      throw Error(ErrorKind::NumericalInconsistency,
                  "workload ccdf forms disagree at t = " + std::to_string(grid[i]));
  }
  return curve;
}

WorkloadTail spectral(const SystemConfig& cfg) {
  const PhaseType& x = cfg.mixture();
  const double lambda = cfg.lambda();
  const Matrix t_full = workload_generator(cfg);

  // Phases that carry mass only.
  const auto keep = ph::reachable_phases(x);
  const Index m = static_cast<Index>(keep.size());
  Matrix t(m, m);
  RowVector alpha(m);
  for (Index i = 0; i < m; ++i) {
    alpha[i] = x.alpha()[keep[static_cast<std::size_t>(i)]];
    for (Index j = 0; j < m; ++j) t(i, j) = t_full(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  }

  WorkloadTail tail;
  tail.spectral = numerics::dominant_decay(t);
  const double theta = tail.spectral.theta;
  if (!(theta > 0.0)) throw Error(ErrorKind::NumericalInconsistency, "workload decay rate is not positive");
  const RowVector beta = (1.0 - lambda) * alpha;
  tail.c_z = lambda * beta.dot(tail.spectral.u) *
             tail.spectral.v.dot((-t).partialPivLu().solve(ones(m)));

  tail.laplace_mix = x.laplace(-theta);
  tail.laplace1 = laplace_or_nan(cfg.type1(), theta);
  tail.laplace2 = laplace_or_nan(cfg.type2(), theta);
  if ((cfg.p() > 0.0 && !(theta < cfg.type1().decay_rate())) ||
      (cfg.p() < 1.0 && !(theta < cfg.type2().decay_rate())))
    throw Error(ErrorKind::NumericalInconsistency, "workload decays no slower than a job type");

  const double expected = (lambda + theta) / lambda;
  if (std::abs(tail.laplace_mix - expected) > 1e-10 * std::max(1.0, expected))
    throw Error(ErrorKind::NumericalInconsistency,
                "S~(-theta_Z) does not match (lambda + theta_Z) / lambda");
  return tail;
}

ExpSumCcdf response_law(const SystemConfig& cfg) {
  const PhaseType& x = cfg.mixture();
  const double lambda = cfg.lambda();
  const Index n = x.order();
  const Matrix t = workload_generator(cfg);
  const Matrix u = numerics::block_upper(t, ones(n) * x.alpha(), x.generator());
  RowVector left = RowVector::Zero(2 * n);
  left.head(n) = lambda * (1.0 - lambda) * x.alpha();
  Vector right(2 * n);
  right << (-t).partialPivLu().solve(ones(n)), ones(n);

  ExpSumCcdf law;
  law.add(ExpTerm{x.alpha(), x.generator(), ones(n), 1.0 - lambda});
  law.add(ExpTerm{left, u, right, 1.0});
  return law;
}

ResponseResult response_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  const auto tail = spectral(cfg);
  return {CcdfCurve{Law::FcfsResponse, grid, response_law(cfg).evaluate(grid)},
          tail.c_z * tail.laplace_mix};
}

Means means(const SystemConfig& cfg) {
  const PhaseType& x = cfg.mixture();
  const double lambda = cfg.lambda();
  const Matrix t = workload_generator(cfg);
  const auto lu = (-t).partialPivLu();
  const RowVector beta = (1.0 - lambda) * x.alpha();
  const double matrix_form = 1.0 + lambda * beta.dot(lu.solve(lu.solve(ones(x.order()))));
  const double workload = lambda * x.moment(2) / (2.0 * (1.0 - lambda));
  if (std::abs(matrix_form - (1.0 + workload)) > kDualFormTol * std::max(1.0, matrix_form))
    throw Error(ErrorKind::NumericalInconsistency, "E[R] forms disagree");
  return {matrix_form, workload};
}

}  // namespace nudgek::fcfs
