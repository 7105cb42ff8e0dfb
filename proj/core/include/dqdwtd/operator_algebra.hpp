#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dqdwtd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/**
 * \brief Square dense complex operator on a finite Hilbert space.
 *
 * Thin value wrapper around an Eigen matrix that enforces squareness. All
 * model operators (a, s_g, s_e, sigma_3, the Hamiltonian) are held this way.
 */
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix data);

  static Operator identity(Index dim);
  static Operator zero(Index dim);

  Index dim() const noexcept { return data_.rows(); }
  const Matrix& matrix() const noexcept { return data_; }
  Complex operator()(Index row, Index col) const { return data_(row, col); }

  Operator adjoint() const;
  Operator transpose() const;
  Operator conjugate() const;

  /// max|M - M^dagger| <= rel_tol * max|M| (the zero operator is Hermitian).
  bool is_hermitian(double rel_tol = 1e-12) const;
  /// Largest entry modulus.
  double max_abs() const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Complex s, Operator op) { return op *= s; }
  friend Operator operator*(Operator op, Complex s) { return op *= s; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  Matrix data_;
};

/// Kronecker product, element ((i*dimB+k),(j*dimB+l)) = A(i,j)*B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);
Operator kron(const Operator& a, const Operator& b);

/// Bosonic annihilation operator truncated to Fock states |0>..|n_max>.
Operator annihilation(int n_max);

/// Dot operators in the fixed basis |0>, |g>, |e> (indices 0, 1, 2).
struct DqdOperators {
  Operator s_g;          ///< |0><g|
  Operator s_e;          ///< |0><e|
  Operator sigma3;       ///< |e><e| - |g><g|
  Operator sigma_plus;   ///< |e><g|
  Operator sigma_minus;  ///< |g><e|
};
DqdOperators dqd_operators();

/**
 * \brief Matrix exponential exp(M t) by Pade scaling and squaring.
 *
 * Diagonal Pade approximants of degree 3, 5, 7, 9 or 13 are selected from the
 * 1-norm of M t, with squaring for larger norms. Throws NumericalRangeError
 * when the result is not finite.
 */
Matrix expm(const Matrix& m, double t = 1.0);
Operator expm(const Operator& m, double t = 1.0);

/**
 * \brief Minimum-norm solver for consistent, possibly singular, systems M x = b.
 *
 * The decomposition is a full SVD; singular values below
 * rank_cutoff * sigma_max are treated as zero. solve() raises
 * InconsistentSystemError when the residual exceeds
 * residual_tol * |b| plus a backward-rounding allowance of the SVD itself.
 */
class MinNormSolver {
 public:
  static constexpr double kRankCutoff = 1e-12;
  static constexpr double kResidualTol = 1e-10;

  explicit MinNormSolver(const Matrix& m);

  /// rhs_uncertainty: absolute error already carried by b, added to the residual tolerance.
  Vector solve(const Vector& b, double rhs_uncertainty = 0.0) const;

  Index rank() const noexcept { return rank_; }
  Index size() const noexcept { return m_.rows(); }
  double sigma_max() const noexcept { return sigma_max_; }
  /// Largest admissible residual for a right-hand side of norm b_norm and solution norm x_norm.
  double residual_tolerance(double b_norm, double x_norm) const;

 private:
  Matrix m_;
  Eigen::BDCSVD<Matrix> svd_;
  Index rank_ = 0;
  double sigma_max_ = 0.0;
};

Vector solve_min_norm(const Matrix& m, const Vector& b);

/// Basis change of the isolated double dot from (L, R, 0) to its eigenbasis.
struct DqdEigenbasis {
  double omega;  ///< sqrt(4 t_c^2 + epsilon^2)
  /// Real orthogonal 3x3 matrix mapping (|g>,|e>,|0>) components to (|L>,|R>,|0>).
  Operator transform;
};
DqdEigenbasis dqd_eigenbasis(double epsilon, double t_c);

/// Eigendecomposition of a general square matrix.
struct Spectrum {
  Vector eigenvalues;
  Matrix right_eigenvectors;
  /// 2-norm condition number of the eigenvector matrix (infinity if singular).
  double condition_estimate = 0.0;
};
Spectrum spectrum(const Matrix& m);

}  // namespace dqdwtd
