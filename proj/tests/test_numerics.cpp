#include <doctest.h>

#include <cmath>
#include <random>

#include "nudgek/error.hpp"
#include "nudgek/numerics.hpp"

using namespace nudgek;
using namespace nudgek::numerics;

namespace {

Matrix random_stable(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = i == j ? 0.0 : u(rng);
  for (int i = 0; i < n; ++i) a(i, i) = -a.row(i).sum() - u(rng);
  return a;
}

}  // namespace

TEST_CASE("mat_exp of zero, nilpotent and scalar matrices") {
  CHECK((mat_exp(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  Matrix n(2, 2);
  n << 0, 1, 0, 0;
  Matrix expected(2, 2);
  expected << 1, 1, 0, 1;
  CHECK((mat_exp(n) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(mat_exp(Matrix::Constant(1, 1, -1.0))(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("mat_exp handles large norms through squaring") {
  CHECK(mat_exp(Matrix::Constant(1, 1, -50.0))(0, 0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-12));
  Matrix rot(2, 2);
  rot << 0, -30, 30, 0;
  const Matrix e = mat_exp(rot);
  CHECK(e(0, 0) == doctest::Approx(std::cos(30.0)).epsilon(1e-10));
  CHECK(e(1, 0) == doctest::Approx(std::sin(30.0)).epsilon(1e-10));
}

TEST_CASE("mat_exp rejects bad input") {
  CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3)), Error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(mat_exp(bad), Error);
}

TEST_CASE("Kronecker product and sum") {
  Matrix a = Matrix::Constant(1, 1, 2.0);
  Matrix b = Matrix::Constant(1, 1, -5.0);
  CHECK(kron_sum(a, b)(0, 0) == -3.0);

  Matrix blk(2, 2);
  blk << 1, 2, 3, 4;
  const Matrix k = kron(Matrix::Identity(2, 2), blk);
  CHECK(k.rows() == 4);
  CHECK((k.topLeftCorner(2, 2) - blk).norm() == 0.0);
  CHECK((k.bottomRightCorner(2, 2) - blk).norm() == 0.0);
  CHECK(k.topRightCorner(2, 2).norm() == 0.0);

  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix x = random_stable(3, rng);
    const Matrix y = random_stable(3, rng);
    const Matrix lhs = mat_exp(kron_sum(x, y));
    const Matrix rhs = kron(mat_exp(x), mat_exp(y));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("Van Loan integral") {
  const Matrix a11 = Matrix::Constant(1, 1, -1.0);
  const Matrix a22 = Matrix::Constant(1, 1, -2.0);
  CHECK(van_loan_integral(a11, Matrix::Zero(1, 1), a22, 1.0)(0, 0) == 0.0);
  CHECK(van_loan_integral(a11, Matrix::Ones(1, 1), a22, 0.0)(0, 0) == 0.0);
  const double v = van_loan_integral(a11, Matrix::Ones(1, 1), a22, 1.0)(0, 0);
  CHECK(v == doctest::Approx(std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-13));
  CHECK(v == doctest::Approx(0.232544).epsilon(1e-6));
}

TEST_CASE("dominant decay of scalar and workload generators") {
  const auto s = dominant_decay(Matrix::Constant(1, 1, -0.25));
  CHECK(s.theta == doctest::Approx(0.25));
  CHECK(s.u[0] == doctest::Approx(1.0));
  CHECK(s.v[0] == doctest::Approx(1.0));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix t = random_stable(4, rng);
    RowVector alpha = RowVector::Constant(4, 0.25);
    t += 0.5 * Vector::Ones(4) * alpha;
    const auto info = dominant_decay(t);
    Eigen::EigenSolver<Matrix> es(t);
    CHECK(-info.theta == doctest::Approx(es.eigenvalues().real().maxCoeff()).epsilon(1e-10));
    CHECK(info.v.dot(info.u) == doctest::Approx(1.0));
    CHECK(info.u.minCoeff() >= 0.0);
    CHECK((t * info.u + info.theta * info.u).norm() < 1e-9);
  }
}

TEST_CASE("adaptive Simpson") {
  const double v = adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 5.0, 1e-12);
  CHECK(v == doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-11));
}
