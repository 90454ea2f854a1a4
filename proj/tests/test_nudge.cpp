#include <doctest.h>

#include <cmath>

#include "configs.hpp"
#include "nudgek/error.hpp"
#include "nudgek/fcfs.hpp"
#include "nudgek/nudge.hpp"
#include "nudgek/numerics.hpp"

using namespace nudgek;
using testcfg::cfg_a;
using testcfg::cfg_b;
using testcfg::cfg_c;

namespace {

// E[e^{-s Z}] for the M/G/1 workload.
double workload_transform(const SystemConfig& cfg, double s) {
  const double lambda = cfg.lambda();
  return (1.0 - lambda) * s / (s - lambda * (1.0 - cfg.mixture().laplace(s)));
}

// P[Z + X > t] by quadrature over the workload density.
double fcfs_type_response(const SystemConfig& cfg, const PhaseType& x, double t) {
  const Matrix gen = fcfs::workload_generator(cfg);
  const RowVector beta = (1.0 - cfg.lambda()) * cfg.mixture().alpha();
  const Vector one = Vector::Ones(gen.rows());
  const auto density = [&](double s) {
    return cfg.lambda() * beta.dot(numerics::mat_exp(gen * s) * one) * x.ccdf(t - s);
  };
  return (1.0 - cfg.lambda()) * x.ccdf(t) + numerics::adaptive_simpson(density, 0.0, t, 1e-12) +
         fcfs::workload_law(cfg)(t);
}

double integral_to_infinity(const ExpSumCcdf& law, double theta) {
  const double upper = 200.0;
  return numerics::adaptive_simpson([&](double t) { return law(t); }, 0.0, upper, 1e-10) + law(upper) / theta;
}

}  // namespace

TEST_CASE("swap probability given the workload") {
  CHECK(nudge::swap_prob_given_workload(cfg_a(SwapDepth(1)), 1.0) ==
        doctest::Approx(0.5 * (1.0 - std::exp(-0.75))).epsilon(1e-12));
  CHECK(nudge::swap_prob_given_workload(cfg_a(SwapDepth::infinite()), 1.0) ==
        doctest::Approx(1.0 - std::exp(-0.375)).epsilon(1e-12));
  CHECK(nudge::swap_prob_given_workload(cfg_a(SwapDepth(1)), 1.0) == doctest::Approx(0.26370).epsilon(1e-4));
  CHECK(nudge::swap_prob_given_workload(cfg_a(SwapDepth::infinite()), 1.0) == doctest::Approx(0.31271).epsilon(1e-4));
  for (double s : {0.5, 1.0, 4.0}) {
    CHECK(std::abs(nudge::swap_prob_given_workload(cfg_a(SwapDepth(50)), s) -
                   nudge::swap_prob_given_workload(cfg_a(SwapDepth::infinite()), s)) < 1e-8);
  }
  CHECK(nudge::swap_prob_given_workload(cfg_a(SwapDepth(0)), 3.0) == 0.0);
  CHECK_THROWS_AS(nudge::swap_matrix(cfg_a(SwapDepth(0))), Error);
}

TEST_CASE("swap probability of a type-2 job") {
  CHECK(nudge::p_swap(cfg_a(SwapDepth(0))) == 0.0);
  const auto only1 = SystemConfig(0.75, 1.0, ph::expo(1.0), ph::expo(3.0), SwapDepth(4));
  CHECK(nudge::p_swap(only1) == 0.0);
  // one pass: the first arrival during the wait must be type 1
  const auto a1 = cfg_a(SwapDepth(1));
  CHECK(nudge::p_swap(a1) == doctest::Approx(0.5 * (1.0 - workload_transform(a1, 0.75))).epsilon(1e-12));
  CHECK(nudge::p_swap(a1) == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  // unlimited passes: any type-1 arrival during the wait
  const auto ainf = cfg_a(SwapDepth::infinite());
  CHECK(nudge::p_swap(ainf) == doctest::Approx(1.0 - workload_transform(ainf, 0.375)).epsilon(1e-12));
  CHECK(nudge::p_swap(cfg_a()) == doctest::Approx(0.39540816326530615).epsilon(1e-12));
  CHECK(std::abs(nudge::p_swap(cfg_a(SwapDepth(200))) - nudge::p_swap(ainf)) < 1e-8);

  for (const auto& base : {cfg_a(), cfg_b(), cfg_c()}) {
    double prev = 0.0;
    for (unsigned k = 0; k <= 10; ++k) {
      const double cur = nudge::p_swap(base.with_depth(SwapDepth(k)));
      CHECK(cur >= prev - 1e-14);
      prev = cur;
    }
    CHECK(nudge::p_swap(base.with_depth(SwapDepth::infinite())) >= prev - 1e-14);
  }
}

TEST_CASE("mean response") {
  const auto equal = SystemConfig(0.6, 0.4, ph::erlang(2, 1.0), ph::expo(1.0), SwapDepth(3));
  CHECK(nudge::mean_response(equal) == doctest::Approx(fcfs::means(equal).response).epsilon(1e-14));
  CHECK(nudge::mean_response(cfg_a(SwapDepth(0))) == doctest::Approx(13.0 / 3.0).epsilon(1e-14));
  CHECK(nudge::mean_response(cfg_a()) == doctest::Approx(4.2015306122448974).epsilon(1e-12));

  const auto cfg = cfg_a();
  const double theta = fcfs::spectral(cfg).theta();
  const double by_type = cfg.p() * integral_to_infinity(nudge::r1_law(cfg), theta) +
                         (1.0 - cfg.p()) * integral_to_infinity(nudge::r2_law(cfg), theta);
  CHECK(by_type == doctest::Approx(nudge::mean_response(cfg)).epsilon(1e-6));
}

TEST_CASE("type-2 waiting and response times") {
  const auto grid = linear_grid(0.0, 30.0, 31);
  for (const auto& base : {cfg_a(), cfg_b(), cfg_c()}) {
    const auto k0 = base.with_depth(SwapDepth(0));
    const auto w = nudge::w2_ccdf(k0, grid);
    const auto z = fcfs::workload_ccdf(k0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(w.values[i] == doctest::Approx(z.values[i]).epsilon(1e-12));
    for (unsigned k : {1U, 3U}) CHECK(nudge::w2_law(base.with_depth(SwapDepth(k)))(0.0) == doctest::Approx(base.lambda()));
  }
  const auto k0 = cfg_a(SwapDepth(0));
  for (double t : {0.5, 2.0, 6.0})
    CHECK(nudge::r2_law(k0)(t) == doctest::Approx(fcfs_type_response(k0, k0.type2(), t)).epsilon(1e-8));

  const auto light = normalize_system(1e-7, 0.5, ph::expo(1.0), ph::erlang(2, 1.0), 2.0, SwapDepth(2));
  for (double t : {0.5, 2.0}) {
    CHECK(nudge::r2_law(light)(t) == doctest::Approx(light.type2().ccdf(t)).epsilon(1e-5));
    CHECK(nudge::r1_law(light)(t) == doctest::Approx(light.type1().ccdf(t)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(nudge::w2_law(cfg_a(SwapDepth(nudge::kMaxCurveDepth + 1))), Error);
}

TEST_CASE("FCFS queue length") {
  const auto q = nudge::fcfs_qlen_geometric(testcfg::mm1());
  CHECK(q.rate(0, 0) == doctest::Approx(0.75));
  for (int n = 1; n < 6; ++n) {
    const double pq = q.pi1.dot(Vector::Ones(1)) * std::pow(q.rate(0, 0), n - 1);
    CHECK(pq == doctest::Approx(0.25 * std::pow(0.75, n)).epsilon(1e-12));
  }
  for (const auto& cfg : {cfg_a(), cfg_b(), cfg_c()}) {
    const auto g = nudge::fcfs_qlen_geometric(cfg);
    const Index n = g.rate.rows();
    const Matrix id = Matrix::Identity(n, n);
    const double mass = (1.0 - cfg.lambda()) + g.pi1 * (id - g.rate).partialPivLu().solve(Vector::Ones(n));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("reduced queue-length laws") {
  const auto k0 = nudge::reduced_qlen(cfg_a(SwapDepth(0)));
  CHECK((k0.pi0_1 - k0.pi1).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((k0.pi1_1 - k0.pi1 * k0.rate).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(k0.pi0_2.cwiseAbs().maxCoeff() < 1e-14);

  const auto only1 = SystemConfig(0.75, 1.0, ph::expo(1.0), ph::expo(3.0), SwapDepth(2));
  const auto p1 = nudge::reduced_qlen(only1);
  CHECK((p1.pi0_2 - p1.pi1 * p1.rate).cwiseAbs().maxCoeff() < 1e-14);

  for (const auto depth : {SwapDepth(1), SwapDepth(2), SwapDepth(7), SwapDepth::infinite()}) {
    const auto cfg = cfg_a(depth);
    const auto r = nudge::reduced_qlen(cfg);
    const Index n = r.rate.rows();
    const Vector one = Vector::Ones(n);
    // direct summation over levels
    double mass = r.pi0_1.dot(one);
    RowVector level1 = r.pi1_1;
    RowVector level2 = r.pi0_2;
    for (int q = 0; q <= 200; ++q) {
      mass += level2.dot(one);
      level2 = level2 * r.rate;
      if (q >= 1) {
        mass += level1.dot(one);
        level1 = level1 * r.rate;
      }
    }
    CHECK(mass == doctest::Approx(cfg.lambda()).epsilon(1e-10));
  }
}

TEST_CASE("type-1 waiting and response times") {
  const auto grid = linear_grid(0.0, 30.0, 31);
  for (const auto& base : {cfg_a(), cfg_b(), cfg_c()}) {
    const auto k0 = base.with_depth(SwapDepth(0));
    const auto w = nudge::w1_ccdf(k0, grid);
    const auto z = fcfs::workload_ccdf(k0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(w.values[i] == doctest::Approx(z.values[i]).epsilon(1e-10));
    for (const auto k : {SwapDepth(1), SwapDepth(4), SwapDepth::infinite()})
      CHECK(nudge::w1_law(base.with_depth(k))(0.0) == doctest::Approx(base.lambda()).epsilon(1e-10));
  }
  const auto k0 = cfg_c(SwapDepth(0));
  for (double t : {0.5, 2.0, 6.0})
    CHECK(nudge::r1_law(k0)(t) == doctest::Approx(fcfs_type_response(k0, k0.type1(), t)).epsilon(1e-8));

  // passing can only help type 1 and only hurt type 2
  const auto cfg = cfg_a();
  for (double t : {1.0, 5.0, 15.0}) {
    CHECK(nudge::w1_law(cfg)(t) <= fcfs::workload_law(cfg)(t) + 1e-12);
    CHECK(nudge::w2_law(cfg)(t) >= fcfs::workload_law(cfg)(t) - 1e-12);
  }
}

TEST_CASE("tail prefactors") {
  for (const auto& base : {cfg_a(), cfg_c()}) {
    const auto c0 = nudge::tail_constants(base.with_depth(SwapDepth(0)));
    const auto tail = fcfs::spectral(base);
    CHECK(c0.c_w1 == doctest::Approx(c0.c_z).epsilon(1e-12));
    CHECK(c0.c_w2 == doctest::Approx(c0.c_z).epsilon(1e-12));
    CHECK(c0.c_r2 == doctest::Approx(c0.c_z * tail.laplace2).epsilon(1e-12));
  }
  CHECK(nudge::tail_constants(testcfg::mm1()).c_fcfs == doctest::Approx(1.0).epsilon(1e-12));

  const auto cfg = cfg_a();
  const auto c = nudge::tail_constants(cfg);
  const double scale = std::exp(c.theta_z * 80.0);
  CHECK(scale * nudge::w2_law(cfg)(80.0) == doctest::Approx(c.c_w2).epsilon(5e-3));
  CHECK(scale * nudge::r2_law(cfg)(80.0) == doctest::Approx(c.c_r2).epsilon(5e-3));
  CHECK(scale * nudge::w1_law(cfg)(80.0) == doctest::Approx(c.c_w1).epsilon(5e-3));
  CHECK(scale * nudge::r1_law(cfg)(80.0) == doctest::Approx(c.c_r1).epsilon(5e-3));
  CHECK(c.c_w2 == doctest::Approx(0.82230339059327373).epsilon(1e-12));
  CHECK(c.c_w1 == doctest::Approx(0.56671378473369649).epsilon(1e-12));
}

TEST_CASE("tail improvement ratio") {
  const auto grid = linear_grid(0.1, 40.0, 400);
  const auto zero = nudge::tir_curve(cfg_a(SwapDepth(0)), grid);
  for (double v : zero.tir) CHECK(std::abs(v) < 1e-10);
  for (const auto k : {SwapDepth(1), SwapDepth(2), SwapDepth(3), SwapDepth::infinite()}) {
    const auto curve = nudge::tir_curve(cfg_a(k), grid);
    double lowest = 1.0;
    for (double v : curve.tir) lowest = std::min(lowest, v);
    CHECK(lowest > 0.0);
  }
  const auto c1 = nudge::tir_curve(cfg_c(SwapDepth(1)), linear_grid(0.05, 10.0, 200));
  double lowest = 1.0;
  for (double v : c1.tir) lowest = std::min(lowest, v);
  CHECK(lowest < 0.0);
  CHECK(nudge::tir_curve(cfg_c(SwapDepth(1)), {80.0}).tir[0] > 0.0);
}
