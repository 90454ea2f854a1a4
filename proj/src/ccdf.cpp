#include "nudgek/ccdf.hpp"

#include <algorithm>
#include <cmath>

#include "nudgek/error.hpp"
#include "nudgek/numerics.hpp"

namespace nudgek {

std::string_view to_string(Law law) {
  switch (law) {
    case Law::Workload: return "Z";
    case Law::FcfsResponse: return "R_FCFS";
    case Law::Wait1: return "W1";
    case Law::Wait2: return "W2";
    case Law::Response1: return "R1";
    case Law::Response2: return "R2";
    case Law::NudgeResponse: return "R_Nudge";
  }
  return "?";
}

void ExpSumCcdf::append(const ExpSumCcdf& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

ExpSumCcdf ExpSumCcdf::scaled(double factor) const {
  ExpSumCcdf out = *this;
  for (auto& term : out.terms_) term.coeff *= factor;
  return out;
}

double ExpSumCcdf::operator()(double t) const {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "ccdf needs t >= 0");
  double total = 0.0;
  for (const auto& term : terms_) {
    if (term.coeff == 0.0) continue;
    const double value = t == 0.0 ? term.left.dot(term.right)
                                   : term.left * numerics::mat_exp(term.generator * t) * term.right;
    total += term.coeff * value;
  }
  return total;
}

std::vector<double> ExpSumCcdf::evaluate(const std::vector<double>& grid) const {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back((*this)(t));
  return out;
}

Index ExpSumCcdf::max_dimension() const {
  Index dim = 0;
  for (const auto& term : terms_) dim = std::max(dim, term.generator.rows());
  return dim;
}

std::vector<double> geometric_grid(double first, double last, int points) {
  if (!(first > 0.0 && last > first) || points < 2)
    throw Error(ErrorKind::InvalidArgument, "geometric grid needs 0 < first < last and >= 2 points");
  std::vector<double> grid{0.0};
  const double ratio = std::log(last / first) / (points - 1);
  for (int i = 0; i < points; ++i) grid.push_back(first * std::exp(ratio * i));
  grid.back() = last;
  return grid;
}

std::vector<double> linear_grid(double first, double last, int points) {
  if (!(first >= 0.0 && last >= first) || points < 1)
    throw Error(ErrorKind::InvalidArgument, "linear grid needs 0 <= first <= last and >= 1 point");
  if (points == 1) return {first};
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid.push_back(first + (last - first) * i / (points - 1));
  return grid;
}

std::vector<double> default_grid(double theta) {
  return geometric_grid(0.01, std::max(20.0, 12.0 / theta), 200);
}

}  // namespace nudgek
