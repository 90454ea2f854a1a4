#include "nudgek/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "nudgek/error.hpp"

namespace nudgek::numerics {
namespace {

double norm1(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Odd/even split of a diagonal Pade approximant: r(A) = (V - U)^{-1} (V + U).
Matrix pade_solve(const Matrix& u, const Matrix& v) {
  return (v - u).partialPivLu().solve(v + u);
}

template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix odd = b[1] * id;
  Matrix even = b[0] * id;
  Matrix power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  return pade_solve(a * odd, even);
}

Matrix pade13(const Matrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                         b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_solve(u, v);
}

}  // namespace

Matrix mat_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "mat_exp needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, "mat_exp input has NaN or Inf entries");
  const Index n = a.rows();
  if (n == 0) return a;

  // Trace shift: exp(A) = e^mu exp(A - mu I); only used when it shrinks the norm.
  const double mu = a.trace() / static_cast<double>(n);
  Matrix shifted = a;
  double shift = 0.0;
  if (mu < 0.0) {
    Matrix candidate = a - mu * Matrix::Identity(n, n);
    if (norm1(candidate) < norm1(a)) {
      shifted = std::move(candidate);
      shift = mu;
    }
  }

  // Backward-error thresholds for orders 3, 5, 7, 9, 13.
  static constexpr std::array<double, 4> theta_low = {1.495585217958292e-2, 2.539398330063230e-1,
                                                      9.504178996162932e-1, 2.097847961257068e0};
  static constexpr double theta13 = 5.371920351148152e0;

  const double norm = norm1(shifted);
  Matrix result;
  if (norm <= theta_low[0]) {
    result = pade_low(shifted, std::array<double, 4>{120.0, 60.0, 12.0, 1.0});
  } else if (norm <= theta_low[1]) {
    result = pade_low(shifted, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
  } else if (norm <= theta_low[2]) {
    result = pade_low(shifted, std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                     25200.0, 1512.0, 56.0, 1.0});
  } else if (norm <= theta_low[3]) {
    result = pade_low(shifted,
                      std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                             30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0});
  } else {
    int squarings = 0;
    if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    result = pade13(shifted / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) result = result * result;
  }
  if (shift != 0.0) result *= std::exp(shift);
  return result;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron_sum(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "kron_sum needs square operands");
  return kron(a, Matrix::Identity(b.rows(), b.rows())) + kron(Matrix::Identity(a.rows(), a.rows()), b);
}

Matrix block_upper(const Matrix& a11, const Matrix& a12, const Matrix& a22) {
  if (a11.rows() != a11.cols() || a22.rows() != a22.cols() || a12.rows() != a11.rows() ||
      a12.cols() != a22.rows())
    throw Error(ErrorKind::DimensionMismatch, "blocks of [[A11, A12], [0, A22]] do not conform");
  const Index n1 = a11.rows();
  const Index n2 = a22.rows();
  Matrix out = Matrix::Zero(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = a11;
  out.topRightCorner(n1, n2) = a12;
  out.bottomRightCorner(n2, n2) = a22;
  return out;
}

Matrix van_loan_integral(const Matrix& a11, const Matrix& a12, const Matrix& a22, double t) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "van_loan_integral needs t >= 0");
  const Matrix big = block_upper(a11, a12, a22);
  return mat_exp(big * t).topRightCorner(a11.rows(), a22.rows());
}

double max_real_eigenvalue(const Matrix& a) {
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotConverged, "eigenvalue solver failed");
  return solver.eigenvalues().real().maxCoeff();
}

namespace {

struct DominantPair {
  std::complex<double> value;
  Vector vector;
};

DominantPair dominant_pair(const Matrix& a, double scale) {
  Eigen::EigenSolver<Matrix> solver(a, true);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotConverged, "eigen-decomposition failed");
  const auto& values = solver.eigenvalues();
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i)
    if (values[i].real() > values[best].real()) best = i;
  const double tol = 1e-9 * scale;
  if (std::abs(values[best].imag()) > tol)
    throw Error(ErrorKind::ComplexDominantEigenvalue, "dominant eigenvalue is not real");
  for (Index i = 0; i < values.size(); ++i) {
    if (i == best) continue;
    if (std::abs(values[i] - values[best]) <= tol)
      throw Error(ErrorKind::ComplexDominantEigenvalue, "dominant eigenvalue is not simple");
  }
  Vector vec = solver.eigenvectors().col(best).real();
  Index largest = 0;
  vec.cwiseAbs().maxCoeff(&largest);
  if (vec[largest] < 0.0) vec = -vec;
  vec /= vec.cwiseAbs().maxCoeff();
  if (vec.minCoeff() < -1e-10)
    throw Error(ErrorKind::ComplexDominantEigenvalue, "dominant eigenvector has mixed signs");
  vec = vec.cwiseMax(0.0);
  return {values[best], vec};
}

}  // namespace

SpectralInfo dominant_decay(const Matrix& t) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::DimensionMismatch, "dominant_decay needs a square matrix");
  if (!t.allFinite()) throw Error(ErrorKind::NonFinite, "dominant_decay input has NaN or Inf entries");
  const double scale = std::max(1.0, t.cwiseAbs().rowwise().sum().maxCoeff());
  const DominantPair right = dominant_pair(t, scale);
  const DominantPair left = dominant_pair(t.transpose(), scale);

  SpectralInfo info;
  info.theta = -right.value.real();
  info.u = right.vector / right.vector.sum();
  const double overlap = left.vector.dot(info.u);
  if (!(overlap > 0.0)) throw Error(ErrorKind::NotConverged, "left and right eigenvectors are orthogonal");
  info.v = (left.vector / overlap).transpose();
  return info;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace nudgek::numerics
