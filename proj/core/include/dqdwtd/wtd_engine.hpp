#pragma once

#include <map>
#include <string>
#include <vector>

#include "dqdwtd/liouvillian.hpp"
#include "dqdwtd/operator_algebra.hpp"

namespace dqdwtd {

/// Tolerance for a probability to sit outside [0, 1] before it is clamped.
inline constexpr double kProbabilitySlack = 1e-9;
/// Largest admissible imaginary part of a probability or density.
inline constexpr double kImaginarySlack = 1e-10;

/// Real part of value clamped to [0,1]; throws NumericalRangeError when the
/// imaginary part or the excursion outside [0,1] exceeds tolerance.
double checked_probability(Complex value, const std::string& what);

using ChannelSequence = std::vector<ChannelLabel>;

/// Probabilities of ordered monitored-click sequences of a fixed length.
struct JumpProbabilityTable {
  std::map<ChannelSequence, double> entries;
  /// 1 - sum(entries): mass not accounted for by the listed sequences.
  double residual = 0.0;

  double at(const ChannelSequence& seq) const;
};

// Free functions take the no-jump generator L0 and a jump superoperator Lj
// directly. Each builds its own singular-value decomposition of L0; use
// WaitingTimeEngine to amortize it over several queries.

/// -Tr{Lj L0^{-1} rho}: probability that the first monitored click is in channel j.
double first_jump_probability(const Superoperator& no_jump, const Superoperator& jump, const DensityMatrix& rho);
/// Tr{Lj exp(L0 t) rho}: density of a first click in channel j at time t.
double wtd_time_density(const Superoperator& no_jump, const Superoperator& jump, const DensityMatrix& rho, double t);
/// Density of the first monitored click at time t, in any channel.
double first_jump_time_density(const MonitoredSplit& split, const DensityMatrix& rho, double t);
/// Tr{exp(L0 t) rho}: probability of no monitored click up to time t.
double survival_probability(const Superoperator& no_jump, const DensityMatrix& rho, double t);
/// Tr{Lj L0^{-1} Li L0^{-1} rho}: first click in i, second in j.
double two_jump_probability(const Superoperator& no_jump, const Superoperator& first, const Superoperator& second,
                            const DensityMatrix& rho);
/// -Tr{L0^{-1} rho}: mean waiting time until the first monitored click.
double mean_first_jump_time(const Superoperator& no_jump, const DensityMatrix& rho);

/// Route used to evaluate exp(L0 tau) inside the jump-number quadrature.
enum class PropagatorRoute {
  automatic,  ///< spectral when the eigenvector basis is well conditioned, else ladder
  spectral,   ///< eigendecomposition of L0
  ladder,     ///< products of Pade exponentials at dyadic fractions of the horizon
};

struct DysonOptions {
  int nodes = 64;  ///< Gauss-Legendre nodes per integration layer
  bool check_convergence = true;
  double convergence_tol = 1e-6;
  PropagatorRoute route = PropagatorRoute::automatic;
  /// Largest eigenvector condition number accepted by the automatic route.
  double max_condition = 1e6;
};

/**
 * \brief Probabilities P_0(t)..P_K(t) of exactly k monitored clicks in [0, t].
 *
 * Each P_k is the k-fold time-ordered integral of the jump expansion of
 * exp(L t), summed over all monitored channel sequences, evaluated by iterated
 * Gauss-Legendre quadrature on the simplex 0 <= t_1 <= ... <= t_k <= t. With
 * check_convergence the computation is repeated at twice the node count and a
 * QuadratureError is raised if any P_k moves by more than convergence_tol. The
 * returned values come from the base node count. In the spectral route the
 * innermost integral is done in closed form in the eigenbasis of L0, so cost
 * grows as nodes^(K-1); the ladder route uses quadrature on every layer.
 */
std::vector<double> jump_number_decomposition(const MonitoredSplit& split, const DensityMatrix& rho, double t,
                                              int max_jumps, const DysonOptions& options = {});

/**
 * \brief Waiting-time statistics for one monitored split with a cached L0 solver.
 */
class WaitingTimeEngine {
 public:
  explicit WaitingTimeEngine(MonitoredSplit split);

  const MonitoredSplit& split() const noexcept { return split_; }
  const MinNormSolver& solver() const noexcept { return solver_; }

  /// vec of -L0^{-1} rho = integral of exp(L0 t) rho over t >= 0.
  Vector integrated_no_jump_state(const Vector& rho_vec) const;

  double first_jump_probability(ChannelLabel channel, const DensityMatrix& rho) const;
  double two_jump_probability(ChannelLabel first, ChannelLabel second, const DensityMatrix& rho) const;
  double mean_first_jump_time(const DensityMatrix& rho) const;

  /// All monitored channels, one click.
  JumpProbabilityTable first_jump_table(const DensityMatrix& rho) const;
  /**
   * All ordered monitored pairs. Every entry is computed directly; the last
   * one is also checked against the complement of the others and a
   * NumericalRangeError raised if they differ by more than 1e-9.
   */
  JumpProbabilityTable two_jump_table(const DensityMatrix& rho) const;

 private:
  const Superoperator& jump(ChannelLabel channel) const;

  MonitoredSplit split_;
  MinNormSolver solver_;
};

}  // namespace dqdwtd
