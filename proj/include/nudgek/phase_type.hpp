#pragma once

#include <string>
#include <vector>

#include "nudgek/linalg.hpp"

namespace nudgek {

/// Phase-type distribution (alpha, S): absorption time of a CTMC with initial
/// row vector alpha and sub-generator S. P[X > t] = alpha e^{S t} 1.
class PhaseType {
 public:
  /// Validates and constructs. Throws Error with NonStochasticAlpha,
  /// NotSubGenerator or DimensionMismatch.
  PhaseType(RowVector alpha, Matrix s);

  Index order() const noexcept { return alpha_.size(); }
  const RowVector& alpha() const noexcept { return alpha_; }
  const Matrix& generator() const noexcept { return s_; }
  /// s* = (-S) 1.
  const Vector& exit_rates() const noexcept { return exit_; }

  double mean() const { return moment(1); }
  /// k! alpha (-S)^{-k} 1.
  double moment(int k) const;
  double scv() const;
  /// alpha (sI - S)^{-1} s*; throws SingularResolvent for s <= -decay_rate().
  double laplace(double s) const;
  double ccdf(double t) const;
  /// -lim log P[X > t] / t, i.e. minus the largest real eigenvalue of S
  /// restricted to phases reachable from alpha.
  double decay_rate() const;

  /// Same shape, time rescaled so the mean equals `mean`.
  PhaseType with_mean(double mean) const;

 private:
  RowVector alpha_;
  Matrix s_;
  Vector exit_;
};

namespace ph {

PhaseType make(RowVector alpha, Matrix s);

PhaseType expo(double mean);
/// k identical phases each with rate k / mean.
PhaseType erlang(int phases, double mean);
/// Two-phase hyperexponential where fraction f of the mean comes from the
/// phase with the smaller mean. Throws InvalidScv (scv <= 1) or InvalidShape.
PhaseType h2_shape(double mean, double scv, double f);
/// Two-phase hyperexponential with balanced means, p1 / mu1 == p2 / mu2.
PhaseType h2_balanced(double mean, double scv);

/// (p alpha1, (1-p) alpha2) with block-diagonal generator.
PhaseType mix(double p, const PhaseType& first, const PhaseType& second);

/// Phases reachable from the support of alpha; the others carry no mass.
std::vector<Index> reachable_phases(const PhaseType& ph);

}  // namespace ph
}  // namespace nudgek
