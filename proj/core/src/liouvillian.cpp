#include "dqdwtd/liouvillian.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "dqdwtd/errors.hpp"

namespace dqdwtd {

namespace {

Index hilbert_dim_of(Index vec_size) {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(vec_size))));
  if (d * d != vec_size) {
    throw DimensionMismatch("vector of length " + std::to_string(vec_size) + " is not a vectorized square matrix");
  }
  return d;
}

}  // namespace

Vector vectorize(const Operator& rho) {
  const Matrix& m = rho.matrix();
  return Eigen::Map<const Vector>(m.data(), m.size());  // Eigen storage is column-major
}

Operator devectorize(const Vector& v) {
  const Index d = hilbert_dim_of(v.size());
  return Operator(Eigen::Map<const Matrix>(v.data(), d, d));
}

Complex trace_of(const Vector& v) {
  const Index d = hilbert_dim_of(v.size());
  Complex tr = 0.0;
  for (Index i = 0; i < d; ++i) tr += v(i * d + i);
  return tr;
}

DensityMatrix::DensityMatrix(Operator op) : DensityMatrix(op, BasisLayout{1, static_cast<int>(op.dim())}) {}

DensityMatrix::DensityMatrix(Operator op, BasisLayout layout) : op_(std::move(op)), layout_(layout) {
  if (op_.dim() == 0) throw InvalidArgument("DensityMatrix: empty operator");
  if (static_cast<Index>(layout_.dqd_dim) * layout_.fock_dim != op_.dim()) {
    throw DimensionMismatch("DensityMatrix: basis layout does not match operator dimension");
  }
  const Matrix& m = op_.matrix();
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("DensityMatrix: operator is not Hermitian");
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()));
  }
}

std::string_view to_string(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::electron_in: return "electron_in";
    case ChannelLabel::electron_out: return "electron_out";
    case ChannelLabel::photon_leak: return "photon_leak";
  }
  return "unknown";
}

std::string_view short_name(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::electron_in: return "in";
    case ChannelLabel::electron_out: return "e";
    case ChannelLabel::photon_leak: return "gamma";
  }
  return "?";
}

Superoperator::Superoperator(Matrix data, Index hilbert_dim, SuperoperatorKind kind)
    : data_(std::move(data)), hilbert_dim_(hilbert_dim), kind_(kind) {
  if (data_.rows() != data_.cols() || data_.rows() != hilbert_dim * hilbert_dim) {
    throw DimensionMismatch("Superoperator: expected a " + std::to_string(hilbert_dim * hilbert_dim) +
                            "-square matrix");
  }
}

Superoperator Superoperator::zero(Index hilbert_dim, SuperoperatorKind kind) {
  const Index n = hilbert_dim * hilbert_dim;
  return {Matrix::Zero(n, n), hilbert_dim, kind};
}

Vector Superoperator::apply(const Vector& v) const {
  if (v.size() != dim()) throw DimensionMismatch("Superoperator::apply: vector size mismatch");
  return data_ * v;
}

Operator Superoperator::apply(const Operator& rho) const { return devectorize(apply(vectorize(rho))); }

Superoperator& Superoperator::operator+=(const Superoperator& rhs) {
  if (dim() != rhs.dim()) throw DimensionMismatch("Superoperator +: dimension mismatch");
  data_ += rhs.data_;
  return *this;
}

Superoperator& Superoperator::operator-=(const Superoperator& rhs) {
  if (dim() != rhs.dim()) throw DimensionMismatch("Superoperator -: dimension mismatch");
  data_ -= rhs.data_;
  return *this;
}

Superoperator sandwich(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("sandwich: operand dimensions differ");
  return {kron(b.matrix().transpose(), a.matrix()), a.dim()};
}

Superoperator jump_superop(const Operator& op, double rate) {
  if (!(rate >= 0.0)) throw InvalidArgument("jump rate must be non-negative");
  return {rate * kron(op.matrix().conjugate(), op.matrix()), op.dim(), SuperoperatorKind::jump};
}

Superoperator dissipator(const Operator& op, double rate) {
  if (!(rate >= 0.0)) throw InvalidArgument("dissipator: rate must be non-negative");
  const Index d = op.dim();
  const Matrix ident = Matrix::Identity(d, d);
  const Matrix ldl = op.matrix().adjoint() * op.matrix();
  Matrix out = kron(op.matrix().conjugate(), op.matrix());
  out -= 0.5 * kron(ident, ldl);
  out -= 0.5 * kron(ldl.transpose(), ident);
  return {rate * out, d};
}

Superoperator hamiltonian_superop(const Operator& hamiltonian) {
  if (!hamiltonian.is_hermitian(1e-10)) throw InvalidArgument("hamiltonian_superop: H is not Hermitian");
  const Index d = hamiltonian.dim();
  const Matrix ident = Matrix::Identity(d, d);
  const Complex minus_i(0.0, -1.0);
  Matrix out = kron(ident, hamiltonian.matrix()) - kron(hamiltonian.matrix().transpose(), ident);
  return {minus_i * out, d};
}

Superoperator build_liouvillian(const Operator& hamiltonian, std::span<const JumpChannel> channels) {
  Superoperator out = hamiltonian_superop(hamiltonian);
  for (const auto& ch : channels) {
    if (ch.op.dim() != hamiltonian.dim()) {
      throw DimensionMismatch("build_liouvillian: channel " + std::string(to_string(ch.label)) +
                              " has a different Hilbert dimension than H");
    }
    out += dissipator(ch.op, ch.rate);
  }
  return out.with_kind(SuperoperatorKind::full);
}

Superoperator MonitoredSplit::total_jump() const {
  Superoperator sum = Superoperator::zero(full.hilbert_dim(), SuperoperatorKind::jump);
  for (const auto& [label, sup] : jumps) sum += sup;
  return sum;
}

MonitoredSplit split_monitored(const Operator& hamiltonian, std::span<const JumpChannel> channels) {
  MonitoredSplit split;
  split.full = build_liouvillian(hamiltonian, channels);
  Superoperator no_jump = split.full;
  for (const auto& ch : channels) {
    if (!ch.monitored) continue;
    Superoperator jump = jump_superop(ch.op, ch.rate);
    no_jump -= jump;
    auto [it, inserted] = split.jumps.emplace(ch.label, jump);
    if (!inserted) it->second += jump;
  }
  if (split.jumps.empty()) throw InvalidArgument("split_monitored: no monitored channel");
  split.no_jump = no_jump.with_kind(SuperoperatorKind::no_jump);
  return split;
}

}  // namespace dqdwtd
