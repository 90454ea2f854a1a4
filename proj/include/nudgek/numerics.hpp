#pragma once

#include <functional>

#include "nudgek/linalg.hpp"

namespace nudgek::numerics {

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant (orders 3..13, chosen from the 1-norm). Throws NonFinite on
/// NaN/Inf input and DimensionMismatch on non-square input.
Matrix mat_exp(const Matrix& a);

/// Kronecker product A (x) B.
Matrix kron(const Matrix& a, const Matrix& b);

/// Kronecker sum A (+) B = A (x) I + I (x) B. Both operands must be square.
Matrix kron_sum(const Matrix& a, const Matrix& b);

/// int_0^t e^{A11 s} A12 e^{A22 (t-s)} ds, read off the upper-right block of
/// exp([[A11, A12], [0, A22]] t).
Matrix van_loan_integral(const Matrix& a11, const Matrix& a12, const Matrix& a22, double t);

/// Assembles [[A11, A12], [0, A22]].
Matrix block_upper(const Matrix& a11, const Matrix& a12, const Matrix& a22);

/// Dominant (maximal real part) eigenpair of a matrix with Perron-Frobenius
/// structure, stored as a decay rate.
struct SpectralInfo {
  double theta = 0.0;  ///< minus the dominant eigenvalue
  Vector u;            ///< right eigenvector, nonnegative
  RowVector v;         ///< left eigenvector, nonnegative, v * u == 1
};

SpectralInfo dominant_decay(const Matrix& t);

/// Largest real part over the spectrum of `a`.
double max_real_eigenvalue(const Matrix& a);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

}  // namespace nudgek::numerics
