#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nudgek/linalg.hpp"

namespace nudgek {

enum class Law { Workload, FcfsResponse, Wait1, Wait2, Response1, Response2, NudgeResponse };

std::string_view to_string(Law law);

/// One term coeff * left e^{generator t} right.
struct ExpTerm {
  RowVector left;
  Matrix generator;
  Vector right;
  double coeff = 1.0;
};

/// A complementary cdf written as a finite sum of matrix-exponential terms.
class ExpSumCcdf {
 public:
  ExpSumCcdf() = default;
  explicit ExpSumCcdf(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

  void add(ExpTerm term) { terms_.push_back(std::move(term)); }
  void append(const ExpSumCcdf& other);
  ExpSumCcdf scaled(double factor) const;

  double operator()(double t) const;
  std::vector<double> evaluate(const std::vector<double>& grid) const;

  /// Largest generator dimension among the terms.
  Index max_dimension() const;
  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<ExpTerm> terms_;
};

struct CcdfCurve {
  Law label = Law::Workload;
  std::vector<double> grid;
  std::vector<double> values;
};

/// `points` geometrically spaced points from `first` to `last`, with t = 0
/// prepended.
std::vector<double> geometric_grid(double first, double last, int points);
std::vector<double> linear_grid(double first, double last, int points);

/// 200 geometric points from 0.01 to max(20, 12 / theta), t = 0 prepended.
std::vector<double> default_grid(double theta);

}  // namespace nudgek
