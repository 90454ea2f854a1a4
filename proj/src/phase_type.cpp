#include "nudgek/phase_type.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nudgek/error.hpp"
#include "nudgek/numerics.hpp"

namespace nudgek {
namespace {

constexpr double kSignTol = 1e-12;

// Phases reachable from the support of alpha through positive off-diagonal
// rates of S.
std::vector<Index> reachable_phases(const RowVector& alpha, const Matrix& s) {
  const Index n = alpha.size();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Index> stack;
  for (Index i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      seen[static_cast<std::size_t>(i)] = true;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    for (Index j = 0; j < n; ++j) {
      if (j != i && s(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

}  // namespace

PhaseType::PhaseType(RowVector alpha, Matrix s) : alpha_(std::move(alpha)), s_(std::move(s)) {
  const Index n = alpha_.size();
  if (n == 0 || s_.rows() != n || s_.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "alpha has length " + std::to_string(n) + " but S is " +
                                                  std::to_string(s_.rows()) + "x" + std::to_string(s_.cols()));
  if (!alpha_.allFinite() || !s_.allFinite())
    throw Error(ErrorKind::NonFinite, "phase-type parameters must be finite");
  if (alpha_.minCoeff() < -kSignTol || std::abs(alpha_.sum() - 1.0) > kSignTol * static_cast<double>(n))
    throw Error(ErrorKind::NonStochasticAlpha, "alpha must be nonnegative and sum to one");
  for (Index i = 0; i < n; ++i) {
    if (!(s_(i, i) < 0.0)) throw Error(ErrorKind::NotSubGenerator, "diagonal entries of S must be negative");
    for (Index j = 0; j < n; ++j)
      if (i != j && s_(i, j) < -kSignTol)
        throw Error(ErrorKind::NotSubGenerator, "off-diagonal entries of S must be nonnegative");
  }
  exit_ = -s_.rowwise().sum();
  if (exit_.minCoeff() < -kSignTol) throw Error(ErrorKind::NotSubGenerator, "row sums of S must be <= 0");
  exit_ = exit_.cwiseMax(0.0);
  alpha_ = alpha_.cwiseMax(0.0);
  const double scale = s_.cwiseAbs().maxCoeff();
  if (!(numerics::max_real_eigenvalue(s_) < -kSignTol * scale))
    throw Error(ErrorKind::NotSubGenerator, "S is singular (some phase never leads to absorption)");
}

double PhaseType::moment(int k) const {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "moment order must be >= 1");
  const auto lu = (-s_).partialPivLu();
  Vector x = Vector::Ones(order());
  double factorial = 1.0;
  for (int i = 1; i <= k; ++i) {
    x = lu.solve(x);
    factorial *= i;
  }
  return factorial * alpha_.dot(x);
}

double PhaseType::scv() const {
  const double m1 = moment(1);
  return moment(2) / (m1 * m1) - 1.0;
}

double PhaseType::decay_rate() const {
  const auto keep = reachable_phases(alpha_, s_);
  const Index m = static_cast<Index>(keep.size());
  Matrix sub(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      sub(i, j) = s_(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
  return -numerics::max_real_eigenvalue(sub);
}

double PhaseType::laplace(double s) const {
  if (s == 0.0) return 1.0;
  if (s <= -decay_rate())
    throw Error(ErrorKind::SingularResolvent,
                "Laplace transform diverges at s = " + std::to_string(s));
  const Matrix resolvent = s * Matrix::Identity(order(), order()) - s_;
  return alpha_.dot(resolvent.partialPivLu().solve(exit_));
}

double PhaseType::ccdf(double t) const {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "ccdf needs t >= 0");
  if (t == 0.0) return 1.0;
  const double value = alpha_ * numerics::mat_exp(s_ * t) * Vector::Ones(order());
  return std::clamp(value, 0.0, 1.0);
}

PhaseType PhaseType::with_mean(double mean) const {
  if (!(mean > 0.0) || !std::isfinite(mean)) throw Error(ErrorKind::InvalidArgument, "mean must be positive");
  return PhaseType(alpha_, s_ * (this->mean() / mean));
}

namespace ph {

PhaseType make(RowVector alpha, Matrix s) { return PhaseType(std::move(alpha), std::move(s)); }

PhaseType expo(double mean) {
  if (!(mean > 0.0)) throw Error(ErrorKind::InvalidArgument, "exponential mean must be positive");
  return PhaseType(RowVector::Ones(1), Matrix::Constant(1, 1, -1.0 / mean));
}

PhaseType erlang(int phases, double mean) {
  if (phases < 1) throw Error(ErrorKind::InvalidArgument, "Erlang needs at least one phase");
  if (!(mean > 0.0)) throw Error(ErrorKind::InvalidArgument, "Erlang mean must be positive");
  const double rate = phases / mean;
  Matrix s = Matrix::Zero(phases, phases);
  for (int i = 0; i < phases; ++i) {
    s(i, i) = -rate;
    if (i + 1 < phases) s(i, i + 1) = rate;
  }
  RowVector alpha = RowVector::Zero(phases);
  alpha[0] = 1.0;
  return PhaseType(alpha, s);
}

PhaseType h2_shape(double mean, double scv, double f) {
  if (!(mean > 0.0)) throw Error(ErrorKind::InvalidArgument, "hyperexponential mean must be positive");
  if (!(scv > 1.0)) throw Error(ErrorKind::InvalidScv, "two-phase hyperexponential needs scv > 1");
  if (!(f > 0.0 && f < 1.0)) throw Error(ErrorKind::InvalidShape, "shape f must lie in (0, 1)");
  // In units of the mean: phase means x (small) and y with f / x + (1-f) / y = 1
  // and f x + (1-f) y = (1 + scv) / 2. x is the smaller root of
  // f x^2 + (1 - 2f - d) x + f d = 0.
  const double d = 0.5 * (1.0 + scv);
  const double b = 1.0 - 2.0 * f - d;
  const double disc = b * b - 4.0 * f * f * d;
  if (disc < 0.0) throw Error(ErrorKind::InvalidShape, "no hyperexponential matches these moments");
  const double x = (-b - std::sqrt(disc)) / (2.0 * f);
  const double y = (d - f * x) / (1.0 - f);
  const double p1 = f / x;
  RowVector alpha(2);
  alpha << p1, 1.0 - p1;
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = -1.0 / (x * mean);
  s(1, 1) = -1.0 / (y * mean);
  return PhaseType(alpha, s);
}

PhaseType h2_balanced(double mean, double scv) { return h2_shape(mean, scv, 0.5); }

PhaseType mix(double p, const PhaseType& first, const PhaseType& second) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "mixing probability must lie in [0, 1]");
  const Index n1 = first.order();
  const Index n2 = second.order();
  RowVector alpha(n1 + n2);
  alpha << p * first.alpha(), (1.0 - p) * second.alpha();
  Matrix s = Matrix::Zero(n1 + n2, n1 + n2);
  s.topLeftCorner(n1, n1) = first.generator();
  s.bottomRightCorner(n2, n2) = second.generator();
  return PhaseType(alpha, s);
}

std::vector<Index> reachable_phases(const PhaseType& ph) {
  return nudgek::reachable_phases(ph.alpha(), ph.generator());
}

}  // namespace ph
}  // namespace nudgek
