#include "dqdwtd/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dqdwtd/errors.hpp"

namespace dqdwtd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(master_seed ^ splitmix64(index));
}

std::size_t ClickRecord::monitored_count(std::span<const JumpChannel> channels) const {
  return static_cast<std::size_t>(std::count_if(clicks.begin(), clicks.end(), [&](const Click& c) {
    return std::any_of(channels.begin(), channels.end(),
                       [&](const JumpChannel& ch) { return ch.label == c.label && ch.monitored; });
  }));
}

TrajectorySimulator::TrajectorySimulator(const Operator& hamiltonian, std::vector<JumpChannel> channels,
                                         TrajectoryOptions options)
    : channels_(std::move(channels)), options_(options) {
  if (!hamiltonian.is_hermitian(1e-10)) throw InvalidArgument("TrajectorySimulator: H is not Hermitian");
  if (!(options_.t_max > 0.0)) throw InvalidArgument("TrajectorySimulator: t_max must be > 0");
  if (!(options_.time_rel_tol > 0.0)) throw InvalidArgument("TrajectorySimulator: time tolerance must be > 0");
  const Index d = hamiltonian.dim();
  Matrix decay = Matrix::Zero(d, d);
  for (const auto& ch : channels_) {
    if (ch.op.dim() != d) throw DimensionMismatch("TrajectorySimulator: channel dimension differs from H");
    if (!(ch.rate >= 0.0)) throw InvalidArgument("TrajectorySimulator: negative rate");
    const Matrix ldl = ch.op.matrix().adjoint() * ch.op.matrix();
    decay += ch.rate * ldl;
    rate_scale_ += ch.rate * ldl.cwiseAbs().maxCoeff();
  }
  h_eff_ = hamiltonian.matrix() - Complex(0.0, 0.5) * decay;
  if (rate_scale_ == 0.0) return;

  top_step_ = std::exp2(std::ceil(std::log2(options_.t_max)));
  const double resolution = options_.time_rel_tol / rate_scale_;
  const int levels = static_cast<int>(std::ceil(std::log2(top_step_ / resolution))) + 1;
  steps_.reserve(levels);
  const Complex minus_i(0.0, -1.0);
  for (int m = 0; m < levels; ++m) steps_.push_back(expm(minus_i * h_eff_, std::ldexp(top_step_, -m)));
}

double TrajectorySimulator::no_jump_norm(const Vector& psi, double tau) const {
  return (expm(Complex(0.0, -1.0) * h_eff_, tau) * psi).squaredNorm();
}

ClickRecord TrajectorySimulator::run(const Vector& psi0, std::uint64_t seed) const {
  if (psi0.size() != h_eff_.rows()) throw DimensionMismatch("run_trajectory: state dimension mismatch");
  const double n0 = psi0.norm();
  if (std::abs(n0 - 1.0) > 1e-10) throw InvalidArgument("run_trajectory: initial state is not normalized");

  std::mt19937_64 rng(seed);
  ClickRecord record;
  Vector psi = psi0 / n0;
  double t = 0.0;
  const double dark_tol = 1e-14 * std::max(rate_scale_, 1e-300);
  std::vector<double> weights(channels_.size());

  for (;;) {
    double total = 0.0;
    for (std::size_t k = 0; k < channels_.size(); ++k) {
      weights[k] = channels_[k].rate * (channels_[k].op.matrix() * psi).squaredNorm();
      total += weights[k];
    }
    if (total <= dark_tol) {
      record.terminated = true;
      break;
    }

    const double threshold = open_uniform(rng);
    const double pick = open_uniform(rng);

    // Largest tau (to the finest step) with |psi(tau)|^2 > threshold.
    Vector phi = psi;
    double tau = 0.0;
    std::vector<NormSample> segment;
    for (std::size_t m = 0; m < steps_.size(); ++m) {
      const double h = std::ldexp(top_step_, -static_cast<int>(m));
      if (t + tau + h > options_.t_max) continue;
      Vector trial = steps_[m] * phi;
      const double norm_sq = trial.squaredNorm();
      if (norm_sq > threshold) {
        phi = std::move(trial);
        tau += h;
        if (options_.store_norm_trace) segment.push_back({t + tau, norm_sq});
      }
    }
    if (options_.store_norm_trace) record.norm_trace.push_back(std::move(segment));
    const double finest = steps_.empty() ? 0.0 : std::ldexp(top_step_, -static_cast<int>(steps_.size() - 1));
    if (t + tau + finest > options_.t_max) {
      record.timed_out = true;
      break;
    }
    if (!phi.allFinite()) throw NumericalRangeError("run_trajectory: no-jump evolution lost finiteness");
    t += tau;

    double jump_total = 0.0;
    for (std::size_t k = 0; k < channels_.size(); ++k) {
      weights[k] = channels_[k].rate * (channels_[k].op.matrix() * phi).squaredNorm();
      jump_total += weights[k];
    }
    if (!(jump_total > 0.0)) throw NumericalRangeError("run_trajectory: no jump weight at the sampled jump time");
    double cumulative = 0.0;
    std::size_t chosen = channels_.size() - 1;
    for (std::size_t k = 0; k < channels_.size(); ++k) {
      cumulative += weights[k];
      if (pick * jump_total < cumulative) {
        chosen = k;
        break;
      }
    }
    const JumpChannel& ch = channels_[chosen];
    Vector jumped = ch.op.matrix() * phi;
    psi = jumped / jumped.norm();
    if (ch.monitored || options_.record_unmonitored) {
      if (!record.clicks.empty() && !(t > record.clicks.back().time)) {
        throw NumericalRangeError("run_trajectory: click times not strictly increasing");
      }
      record.clicks.push_back({ch.label, t});
    }
  }
  return record;
}

ClickRecord run_trajectory(const Operator& hamiltonian, std::span<const JumpChannel> channels, const Vector& psi0,
                           std::uint64_t seed, double t_max) {
  TrajectoryOptions options;
  options.t_max = t_max;
  return TrajectorySimulator(hamiltonian, {channels.begin(), channels.end()}, options).run(psi0, seed);
}

namespace {

Estimate frequency(std::size_t hits, std::size_t n) {
  const double p = n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
  return {p, n ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0};
}

}  // namespace

EnsembleStats run_ensemble(const ModelParams& params, int photons, std::size_t n_traj, std::uint64_t seed,
                           double t_max, const TrajectoryObserver& observer) {
  if (n_traj < 1) throw InvalidArgument("run_ensemble: need at least one trajectory");
  if (photons < 0) throw InvalidArgument("run_ensemble: photon number must be >= 0");
  ModelParams scenario = params;
  scenario.xi = 0.0;
  scenario.n_max = photons;
  const DqdOcModel model = build_model(scenario);
  TrajectoryOptions options;
  options.t_max = t_max;
  const TrajectorySimulator sim(model.hamiltonian, model.channels, options);

  Vector psi0 = Vector::Zero(model.hamiltonian.dim());
  psi0(product_index(0, photons, photons)) = 1.0;

  std::vector<ChannelLabel> monitored;
  for (const auto& ch : model.channels) {
    if (ch.monitored) monitored.push_back(ch.label);
  }

  std::map<ChannelLabel, std::size_t> first_hits, second_hits;
  std::map<std::pair<ChannelLabel, ChannelLabel>, std::size_t> pair_hits;
  for (ChannelLabel a : monitored) {
    first_hits[a] = 0;
    second_hits[a] = 0;
    for (ChannelLabel b : monitored) pair_hits[{a, b}] = 0;
  }

  EnsembleStats stats;
  stats.n_traj = n_traj;
  stats.seed = seed;
  double time_sum = 0.0;
  double time_sq_sum = 0.0;
  std::size_t timed = 0;

  for (std::size_t i = 0; i < n_traj; ++i) {
    ClickRecord rec;
    try {
      rec = sim.run(psi0, derive_seed(seed, i));
    } catch (const Error& e) {
      throw TrajectoryError("trajectory " + std::to_string(i) + ": " + e.what(), i);
    }
    if (observer) observer(i, rec);
    if (!rec.terminated) ++stats.non_terminated;
    ++stats.click_count_histogram[rec.clicks.size()];
    if (!rec.clicks.empty()) {
      ++first_hits[rec.clicks[0].label];
      const double t1 = rec.clicks[0].time;
      time_sum += t1;
      time_sq_sum += t1 * t1;
      ++timed;
    }
    if (rec.clicks.size() >= 2) {
      ++second_hits[rec.clicks[1].label];
      ++pair_hits[{rec.clicks[0].label, rec.clicks[1].label}];
    }
  }

  for (const auto& [label, hits] : first_hits) stats.first_click_freq[label] = frequency(hits, n_traj);
  for (const auto& [label, hits] : second_hits) stats.second_click_freq[label] = frequency(hits, n_traj);
  for (const auto& [pair, hits] : pair_hits) stats.sequence_freq[pair] = frequency(hits, n_traj);
  if (timed > 0) {
    const double n = static_cast<double>(timed);
    const double mean = time_sum / n;
    const double var = timed > 1 ? std::max(0.0, (time_sq_sum - n * mean * mean) / (n - 1.0)) : 0.0;
    stats.mean_first_click_time = {mean, std::sqrt(var / n)};
  }
  return stats;
}

}  // namespace dqdwtd
