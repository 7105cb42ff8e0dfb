#include "dqdwtd/operator_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "dqdwtd/errors.hpp"

namespace dqdwtd {

Operator::Operator(Matrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) {
    throw DimensionMismatch("Operator: matrix is " + std::to_string(data_.rows()) + "x" +
                            std::to_string(data_.cols()) + ", expected square");
  }
}

Operator Operator::identity(Index dim) { return Operator(Matrix::Identity(dim, dim)); }
Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator Operator::adjoint() const { return Operator(data_.adjoint()); }
Operator Operator::transpose() const { return Operator(data_.transpose()); }
Operator Operator::conjugate() const { return Operator(data_.conjugate()); }

double Operator::max_abs() const {
  return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double rel_tol) const {
  if (data_.size() == 0) return true;
  const double scale = max_abs();
  const double dev = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  return dev <= rel_tol * scale;
}

Operator& Operator::operator+=(const Operator& rhs) {
  if (dim() != rhs.dim()) throw DimensionMismatch("Operator +: dimension mismatch");
  data_ += rhs.data_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  if (dim() != rhs.dim()) throw DimensionMismatch("Operator -: dimension mismatch");
  data_ -= rhs.data_;
  return *this;
}

Operator& Operator::operator*=(Complex scale) {
  data_ *= scale;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  if (lhs.dim() != rhs.dim()) throw DimensionMismatch("Operator *: dimension mismatch");
  return Operator(lhs.data_ * rhs.data_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator kron(const Operator& a, const Operator& b) { return Operator(kron(a.matrix(), b.matrix())); }

Operator annihilation(int n_max) {
  if (n_max < 0) throw InvalidArgument("annihilation: n_max must be >= 0");
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(a));
}

DqdOperators dqd_operators() {
  // basis: 0 -> |0>, 1 -> |g>, 2 -> |e>
  Matrix s_g = Matrix::Zero(3, 3);
  s_g(0, 1) = 1.0;
  Matrix s_e = Matrix::Zero(3, 3);
  s_e(0, 2) = 1.0;
  Matrix sigma3 = Matrix::Zero(3, 3);
  sigma3(1, 1) = -1.0;
  sigma3(2, 2) = 1.0;
  Matrix sigma_plus = Matrix::Zero(3, 3);
  sigma_plus(2, 1) = 1.0;
  Matrix sigma_minus = sigma_plus.adjoint();
  return {Operator(std::move(s_g)), Operator(std::move(s_e)), Operator(std::move(sigma3)),
          Operator(std::move(sigma_plus)), Operator(std::move(sigma_minus))};
}

namespace {

// Higham (2005) thresholds on the 1-norm for the degree 3..13 approximants.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

// Fills U (odd part) and V (even part) so that exp(A) ~ (V - U)^{-1} (V + U).
void pade_low(const Matrix& a, int degree, Matrix& u, Matrix& v) {
  static constexpr double b3[] = {120., 60., 12., 1.};
  static constexpr double b5[] = {30240., 15120., 3360., 420., 30., 1.};
  static constexpr double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  static constexpr double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                  2162160.,     110880.,      3960.,        90.,         1.};
  const double* b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;

  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix odd = b[1] * ident;
  v = b[0] * ident;
  Matrix power = ident;
  for (int k = 1; 2 * k <= degree; ++k) {
    power = power * a2;
    odd += b[2 * k + 1] * power;
    v += b[2 * k] * power;
  }
  u.noalias() = a * odd;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  static constexpr double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                                 1187353796428800.,  129060195264000.,   10559470521600.,
                                 670442572800.,      33522128640.,       1323241920.,
                                 40840800.,          960960.,            16380.,
                                 182.,               1.};
  const Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Matrix odd = a6 * tmp;
  odd += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  u.noalias() = a * odd;
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp;
  v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace

Matrix expm(const Matrix& m, double t) {
  if (m.rows() != m.cols()) throw DimensionMismatch("expm: matrix must be square");
  const Index n = m.rows();
  if (n == 0) return Matrix(0, 0);

  Matrix a = m * t;
  const double norm = one_norm(a);
  if (!std::isfinite(norm)) throw NumericalRangeError("expm: non-finite generator");

  Matrix u, v;
  int squarings = 0;
  if (norm <= kTheta3) {
    pade_low(a, 3, u, v);
  } else if (norm <= kTheta5) {
    pade_low(a, 5, u, v);
  } else if (norm <= kTheta7) {
    pade_low(a, 7, u, v);
  } else if (norm <= kTheta9) {
    pade_low(a, 9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    if (squarings > 1023) throw NumericalRangeError("expm: |M t| too large");
    a /= std::ldexp(1.0, squarings);
    pade13(a, u, v);
  }

  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) result = result * result;

  if (!result.allFinite()) {
    throw NumericalRangeError("expm: result overflowed (1-norm of M t = " + std::to_string(norm) + ")");
  }
  return result;
}

Operator expm(const Operator& m, double t) { return Operator(expm(m.matrix(), t)); }

MinNormSolver::MinNormSolver(const Matrix& m) : m_(m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("MinNormSolver: matrix must be square");
  svd_.compute(m_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd_.singularValues();
  sigma_max_ = sv.size() ? sv(0) : 0.0;
  svd_.setThreshold(kRankCutoff);
  rank_ = svd_.rank();
}

double MinNormSolver::residual_tolerance(double b_norm, double x_norm) const {
  // Backward-stable SVD solves leave a residual of order eps * |M| * |x|; that floor
  // dominates 1e-10 |b| once sigma_max/sigma_min reaches ~1e6.
  const double eps = std::numeric_limits<double>::epsilon();
  const double rounding = 16.0 * eps * static_cast<double>(size()) * sigma_max_ * x_norm;
  return kResidualTol * b_norm + rounding;
}

Vector MinNormSolver::solve(const Vector& b, double rhs_uncertainty) const {
  if (b.size() != m_.rows()) throw DimensionMismatch("solve_min_norm: right-hand side size mismatch");
  if (rank_ == 0) {
    if (b.norm() == 0.0) return Vector::Zero(m_.cols());
    throw InconsistentSystemError("solve_min_norm: zero matrix with nonzero right-hand side",
                                  b.norm(), 0.0);
  }
  Vector x = svd_.solve(b);
  const double residual = (m_ * x - b).norm();
  const double tol = residual_tolerance(b.norm(), x.norm()) + rhs_uncertainty;
  if (!(residual <= tol)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "solve_min_norm: right-hand side outside the column space (residual %.3e, tolerance %.3e)",
                  residual, tol);
    throw InconsistentSystemError(msg, residual, tol);
  }
  return x;
}

Vector solve_min_norm(const Matrix& m, const Vector& b) { return MinNormSolver(m).solve(b); }

DqdEigenbasis dqd_eigenbasis(double epsilon, double t_c) {
  const double omega = std::sqrt(4.0 * t_c * t_c + epsilon * epsilon);
  if (omega == 0.0) {
    throw DegenerateParametersError("dqd_eigenbasis: epsilon = t_c = 0 leaves the dot basis undefined");
  }
  // Mixing angle with cos(theta) = epsilon/Omega, sin(theta) = 2 t_c/Omega. The
  // eigenvectors of the L/R Hamiltonian carry the half angle.
  const double half = 0.5 * std::atan2(2.0 * t_c, epsilon);
  const double c = std::cos(half);
  const double s = std::sin(half);
  Matrix u = Matrix::Zero(3, 3);
  u(0, 0) = -c;
  u(0, 1) = s;
  u(1, 0) = s;
  u(1, 1) = c;
  u(2, 2) = 1.0;
  return {omega, Operator(std::move(u))};
}

Spectrum spectrum(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("spectrum: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> solver(m, true);
  if (solver.info() != Eigen::Success) throw NumericalRangeError("spectrum: eigensolver did not converge");
  Spectrum out;
  out.eigenvalues = solver.eigenvalues();
  out.right_eigenvectors = solver.eigenvectors();
  Eigen::JacobiSVD<Matrix> svd(out.right_eigenvectors);
  const auto& sv = svd.singularValues();
  const double smin = sv.size() ? sv(sv.size() - 1) : 1.0;
  out.condition_estimate = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace dqdwtd
