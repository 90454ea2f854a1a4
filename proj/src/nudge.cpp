#include "nudgek/nudge.hpp"

#include <cmath>

#include "nudgek/error.hpp"
#include "nudgek/fcfs.hpp"
#include "nudgek/numerics.hpp"

namespace nudgek::nudge {
namespace {

using numerics::block_upper;
using numerics::kron;
using numerics::kron_sum;

Vector ones(Index n) { return Vector::Ones(n); }

// row * mat^{-1} without forming the inverse.
RowVector right_solve(const RowVector& row, const Matrix& mat) {
  return mat.transpose().partialPivLu().solve(row.transpose()).transpose();
}

Matrix matrix_power(Matrix base, unsigned exponent) {
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

void check_curve_depth(SwapDepth depth) {
  if (!depth.is_infinite() && depth.value() > kMaxCurveDepth)
    throw Error(ErrorKind::DepthTooLarge, "distribution curves support K <= " + std::to_string(kMaxCurveDepth) +
                                              " (or K = inf), got K = " + depth.to_string());
}

RowVector beta_of(const SystemConfig& cfg) { return (1.0 - cfg.lambda()) * cfg.mixture().alpha(); }

// Pieces shared by the type-2 laws: the Kronecker generator T (+) M and the
// row/column selectors beta (x) e_1^* and 1 (x) e_abs.
struct TypeTwoBlocks {
  Matrix kron_gen;
  RowVector start;
  Vector absorb;
};

TypeTwoBlocks type_two_blocks(const SystemConfig& cfg) {
  const SwapMatrix swap = swap_matrix(cfg);
  const Index n = cfg.mixture().order();
  const Index k = swap.rates.rows();
  TypeTwoBlocks blocks;
  blocks.kron_gen = kron_sum(fcfs::workload_generator(cfg), swap.rates);
  RowVector e_first = RowVector::Zero(k);
  e_first[0] = 1.0;
  Vector e_abs = Vector::Zero(k);
  e_abs[swap.absorbing] = 1.0;
  blocks.start = kron(beta_of(cfg), e_first);
  blocks.absorb = kron(ones(n), e_abs);
  return blocks;
}

CcdfCurve make_curve(Law law, const ExpSumCcdf& ccdf, const std::vector<double>& grid) {
  return CcdfCurve{law, grid, ccdf.evaluate(grid)};
}

}  // namespace

SwapMatrix swap_matrix(const SystemConfig& cfg) {
  const SwapDepth depth = cfg.effective_depth();
  const double lambda = cfg.lambda();
  const double p = cfg.p();
  if (depth.is_infinite()) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -lambda * p;
    m(0, 1) = lambda * p;
    return {m, 1};
  }
  const unsigned k = depth.value();
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "swap matrix is undefined for K = 0 (plain FCFS)");
  const Index size = static_cast<Index>(k) + 1;
  Matrix m = Matrix::Zero(size, size);
  for (Index i = 0; i < static_cast<Index>(k); ++i) {
    m(i, i) = -lambda;
    if (i + 1 < static_cast<Index>(k)) m(i, i + 1) = lambda * (1.0 - p);
    m(i, size - 1) = lambda * p;
  }
  return {m, size - 1};
}

double swap_prob_given_workload(const SystemConfig& cfg, double s) {
  if (s < 0.0) throw Error(ErrorKind::InvalidArgument, "workload must be nonnegative");
  const SwapDepth depth = cfg.effective_depth();
  if (depth == SwapDepth(0) || s == 0.0) return 0.0;
  if (depth.is_infinite()) return -std::expm1(-cfg.lambda() * cfg.p() * s);
  const SwapMatrix swap = swap_matrix(cfg);
  return numerics::mat_exp(swap.rates * s)(0, swap.absorbing);
}

double p_swap(const SystemConfig& cfg) {
  const SwapDepth depth = cfg.effective_depth();
  if (depth == SwapDepth(0)) return 0.0;
  const double lambda = cfg.lambda();
  const Matrix t = fcfs::workload_generator(cfg);
  const Index n = t.rows();
  if (depth.is_infinite()) {
    const Matrix shifted = lambda * cfg.p() * Matrix::Identity(n, n) - t;
    return lambda * (1.0 - beta_of(cfg).dot(shifted.partialPivLu().solve(ones(n))));
  }
  const TypeTwoBlocks blocks = type_two_blocks(cfg);
  return -lambda * blocks.start.dot(blocks.kron_gen.partialPivLu().solve(blocks.absorb));
}

double mean_response(const SystemConfig& cfg) {
  const double base = fcfs::means(cfg).response;
  return base + (1.0 - cfg.p()) * p_swap(cfg) * (cfg.type1().mean() - cfg.type2().mean());
}

ExpSumCcdf w2_law(const SystemConfig& cfg) {
  const SwapDepth depth = cfg.effective_depth();
  check_curve_depth(depth);
  ExpSumCcdf law = fcfs::workload_law(cfg);
  if (depth == SwapDepth(0)) return law;

  const TypeTwoBlocks blocks = type_two_blocks(cfg);
  const PhaseType& x1 = cfg.type1();
  const Index m = blocks.kron_gen.rows();
  const Index n1 = x1.order();
  const Matrix gen = block_upper(blocks.kron_gen, blocks.absorb * x1.alpha(), x1.generator());
  RowVector left = RowVector::Zero(m + n1);
  left.head(m) = cfg.lambda() * blocks.start;
  Vector right = Vector::Zero(m + n1);
  right.tail(n1).setOnes();
  law.add(ExpTerm{left, gen, right, 1.0});
  return law;
}

ExpSumCcdf r2_law(const SystemConfig& cfg) {
  const SwapDepth depth = cfg.effective_depth();
  check_curve_depth(depth);
  const double lambda = cfg.lambda();
  const PhaseType& x1 = cfg.type1();
  const PhaseType& x2 = cfg.type2();
  const Index n = cfg.mixture().order();
  const Index n1 = x1.order();
  const Index n2 = x2.order();
  const Matrix t = fcfs::workload_generator(cfg);

  ExpSumCcdf law;
  law.add(ExpTerm{x2.alpha(), x2.generator(), ones(n2), 1.0 - lambda});

  // Workload followed by an own type-2 service.
  {
    const Matrix gen = block_upper(t, ones(n) * x2.alpha(), x2.generator());
    RowVector left = RowVector::Zero(n + n2);
    left.head(n) = lambda * beta_of(cfg);
    Vector right(n + n2);
    right << (-t).partialPivLu().solve(ones(n)), ones(n2);
    law.add(ExpTerm{left, gen, right, 1.0});
  }
  if (depth == SwapDepth(0)) return law;

  // Correction for swapped jobs: X2 replaced by X1 + X2 after the swap.
  const TypeTwoBlocks blocks = type_two_blocks(cfg);
  const Index m = blocks.kron_gen.rows();
  Matrix gen = Matrix::Zero(m + n1 + n2, m + n1 + n2);
  gen.topLeftCorner(m, m) = blocks.kron_gen;
  gen.block(0, m, m, n1) = blocks.absorb * x1.alpha();
  gen.block(0, m + n1, m, n2) = -blocks.absorb * x2.alpha();
  gen.block(m, m, n1, n1) = x1.generator();
  gen.block(m, m + n1, n1, n2) = x1.exit_rates() * x2.alpha();
  gen.bottomRightCorner(n2, n2) = x2.generator();
  RowVector left = RowVector::Zero(m + n1 + n2);
  left.head(m) = lambda * blocks.start;
  Vector right = Vector::Zero(m + n1 + n2);
  right.tail(n1 + n2).setOnes();
  law.add(ExpTerm{left, gen, right, 1.0});
  return law;
}

CcdfCurve w2_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  return make_curve(Law::Wait2, w2_law(cfg), grid);
}

CcdfCurve r2_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  return make_curve(Law::Response2, r2_law(cfg), grid);
}

FcfsQueueLength fcfs_qlen_geometric(const SystemConfig& cfg) {
  const double lambda = cfg.lambda();
  const Matrix t = fcfs::workload_generator(cfg);
  const Index n = t.rows();
  const Matrix shifted = t - lambda * Matrix::Identity(n, n);
  const auto lu = shifted.partialPivLu();
  if (!(std::abs(lu.determinant()) > 0.0)) throw Error(ErrorKind::SingularMatrix, "T - lambda I is singular");
  FcfsQueueLength out;
  out.rate = lu.solve(-lambda * Matrix::Identity(n, n));
  out.pi1 = (1.0 - lambda) * cfg.mixture().alpha() * out.rate;
  Eigen::EigenSolver<Matrix> solver(out.rate, false);
  if (!(solver.eigenvalues().cwiseAbs().maxCoeff() < 1.0))
    throw Error(ErrorKind::NumericalInconsistency, "rate matrix R has spectral radius >= 1");
  return out;
}

ReducedQueueLaw reduced_qlen(const SystemConfig& cfg) {
  const FcfsQueueLength fcfs_q = fcfs_qlen_geometric(cfg);
  const Matrix& r = fcfs_q.rate;
  const Index n = r.rows();
  const double p = cfg.p();
  const SwapDepth depth = cfg.depth();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix q = (1.0 - p) * r;
  const Matrix one_minus_q = id - q;

  ReducedQueueLaw law;
  law.rate = r;
  law.pi1 = fcfs_q.pi1;
  if (depth.is_infinite()) {
    law.pi0_1 = right_solve(fcfs_q.pi1, one_minus_q);
    law.pi1_1 = RowVector::Zero(n);
    law.pi0_2 = p * right_solve(fcfs_q.pi1 * r, one_minus_q);
    return law;
  }
  const unsigned k = depth.value();
  const Matrix q_k = matrix_power(q, k);
  law.pi0_1 = right_solve(fcfs_q.pi1 * (id - q_k * q), one_minus_q);
  law.pi1_1 = fcfs_q.pi1 * q_k * r;
  law.pi0_2 = p * right_solve(fcfs_q.pi1 * r * (id - q_k), one_minus_q);
  return law;
}

namespace {

// Pieces of the type-1 waiting-time law:
//   P[W1 > t] = nu1 e^{G t} xi + c e^{S t} 1 - d e^{S t} v,   v = [1/p; 0].
struct TypeOneParts {
  Matrix kron_gen;  // G = S^T (x) I + (s* alpha)^T (x) R
  Vector xi;        // vec(I)
  RowVector nu1;
  RowVector c;
  RowVector d;
  Vector v;
  bool has_type1_term = false;
};

TypeOneParts type_one_parts(const SystemConfig& cfg) {
  const ReducedQueueLaw law = reduced_qlen(cfg);
  const PhaseType& x = cfg.mixture();
  const Index n = x.order();
  const Index n1 = cfg.type1().order();
  const double lambda = cfg.lambda();
  const double p = cfg.p();
  const Matrix& r = law.rate;
  const Matrix id = Matrix::Identity(n, n);
  // R = -lambda (T - lambda I)^{-1}, so R^{-1} = (lambda I - T) / lambda exactly.
  const Matrix r_inv = (lambda * id - fcfs::workload_generator(cfg)) / lambda;

  TypeOneParts parts;
  parts.kron_gen = kron(x.generator().transpose(), id) + kron((x.exit_rates() * x.alpha()).transpose(), r);
  parts.xi = Eigen::Map<const Vector>(id.data(), n * n);
  const RowVector a1 = right_solve(law.pi1_1 + law.pi0_2, id - r) + law.pi1_1 * r_inv;
  parts.nu1 = kron(RowVector::Ones(n), a1);
  parts.c = law.pi0_1 - law.pi1_1 * r_inv;
  parts.v = Vector::Zero(n);
  parts.has_type1_term = p > 0.0;
  if (parts.has_type1_term) {
    parts.d = law.pi0_2 * r_inv;
    parts.v.head(n1).setConstant(1.0 / p);
    RowVector type1_sel = RowVector::Zero(n);
    type1_sel.head(n1).setConstant(1.0 / p);
    parts.nu1 += kron(type1_sel, parts.d);
  } else {
    parts.d = RowVector::Zero(n);
  }
  return parts;
}

}  // namespace

ExpSumCcdf w1_law(const SystemConfig& cfg) {
  check_curve_depth(cfg.depth());
  const TypeOneParts parts = type_one_parts(cfg);
  const PhaseType& x = cfg.mixture();
  ExpSumCcdf law;
  law.add(ExpTerm{parts.nu1, parts.kron_gen, parts.xi, 1.0});
  law.add(ExpTerm{parts.c, x.generator(), ones(x.order()), 1.0});
  if (parts.has_type1_term) law.add(ExpTerm{parts.d, x.generator(), parts.v, -1.0});
  return law;
}

ExpSumCcdf r1_law(const SystemConfig& cfg) {
  check_curve_depth(cfg.depth());
  const TypeOneParts parts = type_one_parts(cfg);
  const PhaseType& x = cfg.mixture();
  const PhaseType& x1 = cfg.type1();
  const Index n = x.order();
  const Index n1 = x1.order();
  const double lambda = cfg.lambda();

  ExpSumCcdf law = w1_law(cfg);
  law.add(ExpTerm{x1.alpha(), x1.generator(), ones(n1), 1.0 - lambda});

  // Each W1 term f(t) = a e^{A t} b contributes -int f'(s) P[X1 > t - s] ds,
  // i.e. -(a, 0) exp([[A, (A b) alpha1], [0, S1]] t) [0; 1].
  const auto convolve = [&](const RowVector& a, const Matrix& gen, const Vector& b, double coeff) {
    const Index m = gen.rows();
    RowVector left = RowVector::Zero(m + n1);
    left.head(m) = a;
    Vector right = Vector::Zero(m + n1);
    right.tail(n1).setOnes();
    law.add(ExpTerm{left, block_upper(gen, (gen * b) * x1.alpha(), x1.generator()), right, -coeff});
  };
  convolve(parts.nu1, parts.kron_gen, parts.xi, 1.0);
  convolve(parts.c, x.generator(), ones(n), 1.0);
  if (parts.has_type1_term) convolve(parts.d, x.generator(), parts.v, -1.0);
  return law;
}

CcdfCurve w1_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  return make_curve(Law::Wait1, w1_law(cfg), grid);
}

CcdfCurve r1_ccdf(const SystemConfig& cfg, const std::vector<double>& grid) {
  return make_curve(Law::Response1, r1_law(cfg), grid);
}

ExpSumCcdf response_law(const SystemConfig& cfg) {
  const double p = cfg.p();
  ExpSumCcdf law;
  if (p > 0.0) law.append(r1_law(cfg).scaled(p));
  if (p < 1.0) law.append(r2_law(cfg).scaled(1.0 - p));
  return law;
}

TailConstants tail_constants(const SystemConfig& cfg) {
  const auto tail = fcfs::spectral(cfg);
  const double p = cfg.p();
  const double s = tail.laplace_mix;
  const double s1 = tail.laplace1;
  const double s2 = tail.laplace2;

  TailConstants out;
  out.theta_z = tail.theta();
  out.c_z = tail.c_z;
  out.c_fcfs = tail.c_z * s;

  // Type 2: a job is passed with limiting probability 1 - (1-p)^K.
  const SwapDepth depth2 = cfg.effective_depth();
  const double keep2 = depth2.is_infinite() ? 0.0 : std::pow(1.0 - p, depth2.value());
  out.c_w2 = keep2 * tail.c_z + (keep2 < 1.0 ? (1.0 - keep2) * tail.c_z * s1 : 0.0);
  out.c_r2 = out.c_w2 * s2;

  // Type 1: the number of passed jobs is a truncated geometric.
  const SwapDepth depth1 = cfg.depth();
  const double w = (1.0 - p) / s;
  const double w_k = depth1.is_infinite() ? 0.0 : std::pow(w, depth1.value());
  out.c_w1 = tail.c_z * w_k;
  if (p > 0.0) out.c_w1 += tail.c_z * p * (s1 / s) * (1.0 - w_k) / (1.0 - w);
  out.c_r1 = out.c_w1 * s1;
  return out;
}

TirCurve tir_curve(const SystemConfig& cfg, const std::vector<double>& grid) {
  TirCurve out;
  out.fcfs = CcdfCurve{Law::FcfsResponse, grid, fcfs::response_law(cfg).evaluate(grid)};
  out.nudge = make_curve(Law::NudgeResponse, response_law(cfg), grid);
  out.tir.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.tir.push_back(1.0 - out.nudge.values[i] / out.fcfs.values[i]);
  return out;
}

}  // namespace nudgek::nudge
