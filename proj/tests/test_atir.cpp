#include <doctest.h>

#include <cmath>
#include <random>

#include "configs.hpp"
#include "nudgek/atir.hpp"
#include "nudgek/error.hpp"
#include "nudgek/nudge.hpp"

using namespace nudgek;
using testcfg::cfg_a;
using testcfg::cfg_b;
using testcfg::cfg_c;

TEST_CASE("ATIR values") {
  CHECK(atir::atir(cfg_a(), SwapDepth(0)) == 0.0);
  const auto only2 = SystemConfig(0.8, 0.0, ph::expo(2.0), ph::expo(1.0), SwapDepth(3));
  for (const auto k : {SwapDepth(1), SwapDepth(5), SwapDepth::infinite()}) {
    CHECK(atir::atir(only2, k) == 0.0);
    CHECK(atir::delta_atir(only2, 2) == 0.0);
  }
  CHECK(atir::atir(cfg_b(), SwapDepth(1)) > 0.0);
  CHECK(atir::atir(cfg_b(), SwapDepth(2)) > 0.0);
  CHECK(atir::atir(cfg_b(), SwapDepth(3)) < 0.0);
  CHECK(atir::atir(cfg_a(), SwapDepth(2)) == doctest::Approx(0.030269584932515609).epsilon(1e-12));
  CHECK(atir::atir(cfg_a(), SwapDepth(1)) == doctest::Approx(0.025660394140422718).epsilon(1e-12));
}

TEST_CASE("ATIR agrees with the tail prefactors") {
  for (const auto& base : {cfg_a(), cfg_b(), cfg_c()}) {
    for (const auto k : {SwapDepth(0), SwapDepth(1), SwapDepth(2), SwapDepth(5), SwapDepth::infinite()}) {
      const auto c = nudge::tail_constants(base.with_depth(k));
      const double p = base.p();
      const double from_constants = 1.0 - (p * c.c_r1 + (1.0 - p) * c.c_r2) / c.c_fcfs;
      CHECK(std::abs(from_constants - atir::atir(base, k)) < 1e-8);
    }
  }
}

TEST_CASE("optimal depth") {
  CHECK(atir::k_opt(cfg_a()) == 2);
  const auto reversed = normalize_system(0.6, 0.5, ph::expo(1.0), ph::expo(1.0), 0.5, SwapDepth(1));
  CHECK(atir::k_opt(reversed) == 0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 15; ++rep) {
    const auto cfg = normalize_system(0.3 + 0.65 * u(rng), 0.1 + 0.8 * u(rng), ph::erlang(1 + rep % 2, 1.0),
                                      ph::h2_balanced(1.0, 2.0 + 3.0 * u(rng)), 0.5 + 4.0 * u(rng), SwapDepth(1));
    const auto tail = fcfs::spectral(cfg);
    const unsigned best = atir::k_opt(tail, cfg.p());
    const double top = atir::atir(tail, cfg.p(), SwapDepth(best));
    for (unsigned k = 0; k <= best + 50; ++k) CHECK(top >= atir::atir(tail, cfg.p(), SwapDepth(k)) - 1e-14);
    CHECK(top >= atir::atir(tail, cfg.p(), SwapDepth::infinite()) - 1e-14);
  }
}

TEST_CASE("ATIR increments") {
  for (const auto& cfg : {cfg_a(), cfg_b(), cfg_c()})
    CHECK(atir::delta_atir(cfg, 0) == doctest::Approx(atir::atir(cfg, SwapDepth(1))).epsilon(1e-12));
  CHECK(atir::delta_atir(cfg_a(), 1) > 0.0);
  CHECK(atir::delta_atir(cfg_a(), 2) < 0.0);
  for (unsigned k = 0; k < 6; ++k) {
    const double diff = atir::atir(cfg_c(), SwapDepth(k + 1)) - atir::atir(cfg_c(), SwapDepth(k));
    CHECK(atir::delta_atir(cfg_c(), k) == doctest::Approx(diff).epsilon(1e-10));
  }
}

TEST_CASE("positivity conditions") {
  CHECK(atir::positivity_conditions(cfg_a(), SwapDepth(1)).for_k1);
  const auto close = normalize_system(0.75, 0.5, ph::expo(1.0), ph::expo(1.0), 1.05, SwapDepth(1));
  const auto tail = fcfs::spectral(close);
  REQUIRE(1.05 <= tail.laplace_mix);
  CHECK_FALSE(atir::positivity_conditions(close, SwapDepth(1)).for_k1);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto cfg = normalize_system(0.2 + 0.75 * u(rng), 0.1 + 0.8 * u(rng), ph::expo(1.0),
                                      ph::h2_shape(1.0, 1.5 + 4.0 * u(rng), 0.2 + 0.7 * u(rng)),
                                      0.5 + 3.0 * u(rng), SwapDepth(1));
    for (unsigned k : {1U, 2U, 5U, 20U}) {
      const double value = atir::atir(cfg, SwapDepth(k));
      if (std::abs(value) < 1e-12) continue;
      CHECK(atir::positivity_conditions(cfg, SwapDepth(k)).for_k == (value > 0.0));
    }
  }
}

TEST_CASE("heavy-traffic depth") {
  const auto equal = normalize_system(0.9, 0.5, ph::expo(1.0), ph::expo(1.0), 1.0, SwapDepth(1));
  CHECK(atir::heavy_traffic_k(equal).k_approx == 0);
  const auto reversed = normalize_system(0.9, 0.5, ph::expo(1.0), ph::expo(1.0), 0.5, SwapDepth(1));
  CHECK_THROWS_AS(atir::heavy_traffic_k(reversed), Error);

  const auto at = [](double lambda) {
    return normalize_system(lambda, 0.5, ph::expo(1.0), ph::expo(1.0), 2.0, SwapDepth(1));
  };
  const auto heavy = at(0.99);
  CHECK(std::abs(atir::heavy_traffic_k(heavy).k_approx - static_cast<long>(atir::k_opt(heavy))) <= 1);
  unsigned prev = 0;
  for (int i = 0; i <= 9; ++i) {
    const unsigned k = atir::k_opt(at(0.5 + 0.05 * i));
    CHECK(k >= prev);
    prev = k;
  }
}
