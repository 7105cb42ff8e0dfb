#pragma once

// Test-only helpers: random inputs and reference computations that do not go
// through the library code paths they are used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dqdwtd/operator_algebra.hpp"

namespace dqdwtd::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline Matrix random_hermitian(std::mt19937_64& rng, Index dim) {
  const Matrix m = random_matrix(rng, dim, dim);
  return 0.5 * (m + m.adjoint());
}

/// Random full-rank density matrix A A^dagger / Tr.
inline Matrix random_density(std::mt19937_64& rng, Index dim) {
  const Matrix a = random_matrix(rng, dim, dim);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

/// A rho B with explicit loops.
inline Matrix brute_sandwich(const Matrix& a, const Matrix& rho, const Matrix& b) {
  const Index d = rho.rows();
  Matrix out = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l) out(i, j) += a(i, k) * rho(k, l) * b(l, j);
  return out;
}

/// exp(M t) by Taylor series with scaling and squaring (independent of the Pade path).
inline Matrix taylor_expm(const Matrix& m, double t) {
  const Matrix a = m * t;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
  const Matrix b = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Adaptive Gauss-Kronrod integral of f on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol);
}

}  // namespace dqdwtd::testing
