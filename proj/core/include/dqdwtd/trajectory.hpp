#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dqdwtd/dqd_oc_model.hpp"
#include "dqdwtd/liouvillian.hpp"
#include "dqdwtd/operator_algebra.hpp"

namespace dqdwtd {

struct Click {
  ChannelLabel label;
  double time;

  friend bool operator==(const Click&, const Click&) = default;
};

/// Squared norm of the unnormalized no-jump state at an absolute time.
struct NormSample {
  double time;
  double norm_sq;
};

struct ClickRecord {
  std::vector<Click> clicks;  ///< strictly increasing times
  /// Ended in a state with no jump weight left (dark state).
  bool terminated = false;
  /// Reached t_max with jump weight remaining.
  bool timed_out = false;
  /// Per no-jump segment, accepted bisection points; only filled on request.
  std::vector<std::vector<NormSample>> norm_trace;

  std::size_t monitored_count(std::span<const JumpChannel> channels) const;
};

struct TrajectoryOptions {
  double t_max = 200.0;
  /// Also record jumps of unmonitored channels (does not change random draws).
  bool record_unmonitored = false;
  bool store_norm_trace = false;
  /// Jump-time resolution relative to the inverse total jump rate.
  double time_rel_tol = 1e-10;
};

/// Counter-based splitting of a master seed: independent of run order.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/**
 * \brief Quantum-jump unraveling of a Lindblad model on pure states.
 *
 * Between jumps psi evolves under H_eff = H - (i/2) sum_k rate_k L_k^dagger L_k.
 * The next jump happens when |psi(t)|^2 falls to a uniform draw u; the
 * crossing is located by binary refinement over exact propagators
 * exp(-i H_eff h) for dyadic step sizes h. The channel is then chosen with
 * probability proportional to rate_k |L_k psi|^2.
 */
class TrajectorySimulator {
 public:
  TrajectorySimulator(const Operator& hamiltonian, std::vector<JumpChannel> channels,
                      TrajectoryOptions options = {});

  ClickRecord run(const Vector& psi0, std::uint64_t seed) const;

  /// |exp(-i H_eff tau) psi|^2, for checks.
  double no_jump_norm(const Vector& psi, double tau) const;

  const std::vector<JumpChannel>& channels() const noexcept { return channels_; }
  const TrajectoryOptions& options() const noexcept { return options_; }

 private:
  std::vector<JumpChannel> channels_;
  TrajectoryOptions options_;
  Matrix h_eff_;
  std::vector<Matrix> steps_;  ///< exp(-i H_eff h_m) with h_m = top_step * 2^-m
  double top_step_ = 0.0;
  double rate_scale_ = 0.0;
};

ClickRecord run_trajectory(const Operator& hamiltonian, std::span<const JumpChannel> channels, const Vector& psi0,
                           std::uint64_t seed, double t_max);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct EnsembleStats {
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  /// Label of the first monitored click; frequency over all trajectories.
  std::map<ChannelLabel, Estimate> first_click_freq;
  /// Label of the second monitored click.
  std::map<ChannelLabel, Estimate> second_click_freq;
  /// Ordered label pair of the first two monitored clicks.
  std::map<std::pair<ChannelLabel, ChannelLabel>, Estimate> sequence_freq;
  /// Over trajectories with at least one monitored click.
  Estimate mean_first_click_time;
  std::map<std::size_t, std::size_t> click_count_histogram;
  std::size_t non_terminated = 0;
};

using TrajectoryObserver = std::function<void(std::size_t index, const ClickRecord& record)>;

/**
 * \brief n-photon ensemble: pump off, initial state |0> (x) |n>.
 *
 * Trajectory i uses seed derive_seed(seed, i); statistics are reduced in
 * trajectory order, so results depend only on (params, photons, n_traj, seed,
 * t_max). The observer, when set, sees every record in order.
 */
EnsembleStats run_ensemble(const ModelParams& params, int photons, std::size_t n_traj, std::uint64_t seed,
                           double t_max, const TrajectoryObserver& observer = {});

}  // namespace dqdwtd
