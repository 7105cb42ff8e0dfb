#pragma once

#include <map>
#include <span>
#include <string_view>

#include "dqdwtd/operator_algebra.hpp"

namespace dqdwtd {

// Vectorization is column stacking: |i><j| sits at index j*D + i, so that
// vec(A rho B) = (B^T (x) A) vec(rho).

Vector vectorize(const Operator& rho);
Operator devectorize(const Vector& v);
/// Tr of the operator whose column-stacked vector is v.
Complex trace_of(const Vector& v);

/// Factorization of the Hilbert space as dot (x) Fock, kept for labelling only.
struct BasisLayout {
  int dqd_dim = 1;
  int fock_dim = 1;
};

/**
 * \brief Validated density matrix: unit trace, Hermitian, positive semidefinite.
 *
 * Construction checks trace = 1 +- 1e-12, Hermiticity to 1e-12 and a minimum
 * eigenvalue >= -1e-10, raising InvalidArgument otherwise.
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator op);
  DensityMatrix(Operator op, BasisLayout layout);

  const Operator& op() const noexcept { return op_; }
  Index dim() const noexcept { return op_.dim(); }
  const BasisLayout& layout() const noexcept { return layout_; }
  Vector vectorized() const { return vectorize(op_); }

 private:
  Operator op_;
  BasisLayout layout_;
};

enum class ChannelLabel { electron_in, electron_out, photon_leak };

std::string_view to_string(ChannelLabel label);
/// Short label used in tables: "in", "e", "gamma".
std::string_view short_name(ChannelLabel label);

/// A Lindblad channel rate * D[op]; the rate is kept apart from the bare operator.
struct JumpChannel {
  ChannelLabel label;
  Operator op;
  double rate = 0.0;
  bool monitored = false;
};

enum class SuperoperatorKind { generic, full, no_jump, jump };

/// D^2 x D^2 matrix acting on column-stacked density matrices.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Matrix data, Index hilbert_dim, SuperoperatorKind kind = SuperoperatorKind::generic);

  static Superoperator zero(Index hilbert_dim, SuperoperatorKind kind = SuperoperatorKind::generic);

  const Matrix& matrix() const noexcept { return data_; }
  Index hilbert_dim() const noexcept { return hilbert_dim_; }
  Index dim() const noexcept { return data_.rows(); }
  SuperoperatorKind kind() const noexcept { return kind_; }

  Vector apply(const Vector& v) const;
  Operator apply(const Operator& rho) const;

  Superoperator& operator+=(const Superoperator& rhs);
  Superoperator& operator-=(const Superoperator& rhs);
  friend Superoperator operator+(Superoperator lhs, const Superoperator& rhs) { return lhs += rhs; }
  friend Superoperator operator-(Superoperator lhs, const Superoperator& rhs) { return lhs -= rhs; }

  Superoperator with_kind(SuperoperatorKind kind) const { return {data_, hilbert_dim_, kind}; }

 private:
  Matrix data_;
  Index hilbert_dim_ = 0;
  SuperoperatorKind kind_ = SuperoperatorKind::generic;
};

/// Superoperator of rho -> A rho B.
Superoperator sandwich(const Operator& a, const Operator& b);

/// rate * D[op], with D[L] rho = L rho L^dagger - {L^dagger L, rho}/2.
Superoperator dissipator(const Operator& op, double rate);
/// rho -> -i[H, rho]; H must be Hermitian to 1e-10 max|H|.
Superoperator hamiltonian_superop(const Operator& hamiltonian);
/// rho -> rate * L rho L^dagger.
Superoperator jump_superop(const Operator& op, double rate);

Superoperator build_liouvillian(const Operator& hamiltonian, std::span<const JumpChannel> channels);

/// Full generator split into monitored jump terms and the no-jump remainder.
struct MonitoredSplit {
  Superoperator full;
  Superoperator no_jump;
  std::map<ChannelLabel, Superoperator> jumps;

  /// Sum of all monitored jump superoperators.
  Superoperator total_jump() const;
};

MonitoredSplit split_monitored(const Operator& hamiltonian, std::span<const JumpChannel> channels);

}  // namespace dqdwtd
