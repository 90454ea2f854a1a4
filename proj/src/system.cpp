#include "nudgek/system.hpp"

#include <charconv>
#include <cmath>

#include "nudgek/error.hpp"

namespace nudgek {

SwapDepth SwapDepth::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinite();
  unsigned value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw Error(ErrorKind::ConfigError, "swap depth must be a non-negative integer or \"inf\", got \"" +
                                            std::string(text) + "\"");
  return SwapDepth(value);
}

unsigned SwapDepth::value() const {
  if (!depth_) throw Error(ErrorKind::InvalidArgument, "swap depth is infinite");
  return *depth_;
}

std::string SwapDepth::to_string() const { return depth_ ? std::to_string(*depth_) : "inf"; }

SystemConfig::SystemConfig(double lambda, double p, PhaseType type1, PhaseType type2, SwapDepth depth)
    : lambda_(lambda),
      p_(p),
      type1_(std::move(type1)),
      type2_(std::move(type2)),
      depth_(depth),
      mixture_(ph::mix(p >= 0.0 && p <= 1.0 ? p : 0.0, type1_, type2_)) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw Error(ErrorKind::UnstableSystem, "arrival rate (= load) must lie in (0, 1), got " + std::to_string(lambda));
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "type-1 probability must lie in [0, 1]");
  const double mean = mixture_.mean();
  if (std::abs(mean - 1.0) > 1e-12)
    throw Error(ErrorKind::ConfigError, "job sizes must be normalised to E[X] = 1, got " + std::to_string(mean));
}

SwapDepth SystemConfig::effective_depth() const noexcept {
  if (p_ == 0.0 || p_ == 1.0) return SwapDepth(0);
  return depth_;
}

SystemConfig SystemConfig::with_depth(SwapDepth depth) const {
  SystemConfig copy = *this;
  copy.depth_ = depth;
  return copy;
}

SystemConfig SystemConfig::with_lambda(double lambda) const {
  return SystemConfig(lambda, p_, type1_, type2_, depth_);
}

SystemConfig normalize_system(double lambda, double p, const PhaseType& shape1, const PhaseType& shape2,
                              double ratio, SwapDepth depth) {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw Error(ErrorKind::InvalidArgument, "mean ratio E[X2]/E[X1] must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "type-1 probability must lie in [0, 1]");
  const double mean1 = 1.0 / (p + (1.0 - p) * ratio);
  return SystemConfig(lambda, p, shape1.with_mean(mean1), shape2.with_mean(ratio * mean1), depth);
}

}  // namespace nudgek
