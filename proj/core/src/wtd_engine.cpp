#include "dqdwtd/wtd_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "dqdwtd/errors.hpp"
#include "dqdwtd/quadrature.hpp"

namespace dqdwtd {

double checked_probability(Complex value, const std::string& what) {
  const double scale = std::max(1.0, std::abs(value.real()));
  if (std::abs(value.imag()) > kImaginarySlack * scale) {
    throw NumericalRangeError(what + ": imaginary part " + std::to_string(value.imag()) + " exceeds tolerance");
  }
  const double p = value.real();
  if (p < -kProbabilitySlack || p > 1.0 + kProbabilitySlack) {
    throw NumericalRangeError(what + ": value " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

double JumpProbabilityTable::at(const ChannelSequence& seq) const {
  auto it = entries.find(seq);
  if (it == entries.end()) throw InvalidArgument("JumpProbabilityTable: sequence not present");
  return it->second;
}

namespace {

void require_same_dim(const Superoperator& a, const Superoperator& b, const char* what) {
  if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": superoperator dimensions differ");
}

void require_state_dim(const Superoperator& s, const DensityMatrix& rho, const char* what) {
  if (s.hilbert_dim() != rho.dim()) throw DimensionMismatch(std::string(what) + ": state dimension mismatch");
}

double checked_density(Complex value, double scale, const std::string& what) {
  if (std::abs(value.imag()) > kImaginarySlack * std::max(1.0, scale)) {
    throw NumericalRangeError(what + ": imaginary part " + std::to_string(value.imag()) + " exceeds tolerance");
  }
  if (value.real() < -kImaginarySlack * std::max(1.0, scale)) {
    throw NumericalRangeError(what + ": negative density " + std::to_string(value.real()));
  }
  return std::max(0.0, value.real());
}

double generator_scale(const Superoperator& s) { return s.matrix().cwiseAbs().maxCoeff(); }

// Rounding error carried into jump * x by the solve that produced x; it can
// point outside the range of L0 and must not count as inconsistency.
double chained_rounding(const MinNormSolver& solver, const Superoperator& jump, const Vector& x) {
  const double eps = std::numeric_limits<double>::epsilon();
  return 16.0 * eps * static_cast<double>(solver.size()) * jump.matrix().norm() * x.norm();
}

}  // namespace

double first_jump_probability(const Superoperator& no_jump, const Superoperator& jump, const DensityMatrix& rho) {
  require_same_dim(no_jump, jump, "first_jump_probability");
  require_state_dim(no_jump, rho, "first_jump_probability");
  const MinNormSolver solver(no_jump.matrix());
  const Vector integrated = solver.solve(-rho.vectorized());
  return checked_probability(trace_of(jump.apply(integrated)), "first_jump_probability");
}

double wtd_time_density(const Superoperator& no_jump, const Superoperator& jump, const DensityMatrix& rho, double t) {
  require_same_dim(no_jump, jump, "wtd_time_density");
  require_state_dim(no_jump, rho, "wtd_time_density");
  if (!(t >= 0.0)) throw InvalidArgument("wtd_time_density: t must be >= 0");
  const Vector evolved = expm(no_jump.matrix(), t) * rho.vectorized();
  return checked_density(trace_of(jump.apply(evolved)), generator_scale(jump), "wtd_time_density");
}

double first_jump_time_density(const MonitoredSplit& split, const DensityMatrix& rho, double t) {
  require_state_dim(split.no_jump, rho, "first_jump_time_density");
  if (!(t >= 0.0)) throw InvalidArgument("first_jump_time_density: t must be >= 0");
  const Vector evolved = expm(split.no_jump.matrix(), t) * rho.vectorized();
  Complex channel_sum = 0.0;
  for (const auto& [label, jump] : split.jumps) channel_sum += trace_of(jump.apply(evolved));
  // Trace-derivative form; agrees with the channel sum because the full generator is trace preserving.
  const Complex trace_loss = -trace_of(split.no_jump.apply(evolved));
  const double scale = generator_scale(split.no_jump);
  if (std::abs(channel_sum - trace_loss) > 1e-9 * std::max(1.0, scale)) {
    throw NumericalRangeError("first_jump_time_density: channel sum and trace loss disagree");
  }
  return checked_density(channel_sum, scale, "first_jump_time_density");
}

double survival_probability(const Superoperator& no_jump, const DensityMatrix& rho, double t) {
  require_state_dim(no_jump, rho, "survival_probability");
  if (!(t >= 0.0)) throw InvalidArgument("survival_probability: t must be >= 0");
  const Vector evolved = expm(no_jump.matrix(), t) * rho.vectorized();
  return checked_probability(trace_of(evolved), "survival_probability");
}

double two_jump_probability(const Superoperator& no_jump, const Superoperator& first, const Superoperator& second,
                            const DensityMatrix& rho) {
  require_same_dim(no_jump, first, "two_jump_probability");
  require_same_dim(no_jump, second, "two_jump_probability");
  require_state_dim(no_jump, rho, "two_jump_probability");
  const MinNormSolver solver(no_jump.matrix());
  const Vector integrated = solver.solve(-rho.vectorized());
  const Vector after_first = first.apply(integrated);
  const Vector after_second = solver.solve(-after_first, chained_rounding(solver, first, integrated));
  return checked_probability(trace_of(second.apply(after_second)), "two_jump_probability");
}

double mean_first_jump_time(const Superoperator& no_jump, const DensityMatrix& rho) {
  require_state_dim(no_jump, rho, "mean_first_jump_time");
  const MinNormSolver solver(no_jump.matrix());
  const Complex t = trace_of(solver.solve(-rho.vectorized()));
  if (std::abs(t.imag()) > kImaginarySlack * std::max(1.0, std::abs(t.real())) || !(t.real() > 0.0)) {
    throw NumericalRangeError("mean_first_jump_time: non-positive or complex mean time");
  }
  return t.real();
}

// ---------------------------------------------------------------------------
// Jump-number decomposition

namespace {

/**
 * exp(L0 tau) for 0 <= tau <= horizon, acting on vectors in an internal
 * coordinate system. In the spectral route coordinates are eigen-coordinates
 * of L0 and propagation is diagonal; in the ladder route coordinates are the
 * plain vectorized density matrix and tau is decomposed into dyadic
 * fractions of the horizon.
 */
// (exp(z) - 1) / z without cancellation near z = 0.
Complex phi1(Complex z) {
  if (std::abs(z) < 0.1) {
    Complex term = 1.0, sum = 1.0;
    for (int k = 2; k <= 12; ++k) {
      term *= z / static_cast<double>(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

class NoJumpPropagator {
 public:
  NoJumpPropagator(const Superoperator& no_jump, const Superoperator& total_jump, double horizon,
                   const DysonOptions& options)
      : horizon_(horizon) {
    const Matrix& l0 = no_jump.matrix();
    bool use_spectral = options.route != PropagatorRoute::ladder;
    if (use_spectral) {
      Spectrum spec = spectrum(l0);
      const double scale = std::max(1.0, l0.cwiseAbs().maxCoeff());
      const Matrix& v = spec.right_eigenvectors;
      const double recon = (l0 * v - v * spec.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
      const bool acceptable = spec.condition_estimate <= options.max_condition && recon <= 1e-9 * scale;
      if (options.route == PropagatorRoute::spectral && !acceptable) {
        throw NumericalRangeError("jump_number_decomposition: L0 eigenbasis is ill conditioned");
      }
      use_spectral = acceptable;
      if (use_spectral) {
        spectral_ = true;
        eigenvalues_ = spec.eigenvalues;
        const auto lu = v.partialPivLu();
        to_coords_ = lu.inverse();
        jump_ = to_coords_ * total_jump.matrix() * v;
        // Tr of x = sum_i x(i*D+i); in eigen-coordinates that is (trace row) * V.
        const Index d = no_jump.hilbert_dim();
        Eigen::RowVectorXcd tr_row = Eigen::RowVectorXcd::Zero(l0.rows());
        for (Index i = 0; i < d; ++i) tr_row(i * d + i) = 1.0;
        trace_row_ = tr_row * v;
        return;
      }
    }
    jump_ = total_jump.matrix();
    const Index d = no_jump.hilbert_dim();
    trace_row_ = Eigen::RowVectorXcd::Zero(l0.rows());
    for (Index i = 0; i < d; ++i) trace_row_(i * d + i) = 1.0;
    generator_ = l0;
    ladder_.reserve(kLadderDepth);
    for (int k = 0; k < kLadderDepth; ++k) ladder_.push_back(expm(l0, std::ldexp(horizon, -k)));
  }

  bool spectral() const noexcept { return spectral_; }

  Vector coords(const Vector& v) const { return spectral_ ? Vector(to_coords_ * v) : v; }

  Vector propagate(const Vector& c, double tau) const {
    if (spectral_) return ((eigenvalues_ * tau).array().exp() * c.array()).matrix();
    Vector out = c;
    double remaining = horizon_ > 0.0 ? tau / horizon_ : 0.0;
    for (int k = 0; k < kLadderDepth && remaining > 0.0; ++k) {
      const double step = std::ldexp(1.0, -k);
      if (remaining >= step) {
        out = ladder_[k] * out;
        remaining -= step;
      }
    }
    if (remaining > 0.0) out += (remaining * horizon_) * (generator_ * out);  // first order in t*2^-52
    return out;
  }

  Vector jump(const Vector& c) const { return jump_ * c; }
  Complex trace(const Vector& c) const { return trace_row_ * c; }

  /**
   * Spectral route only: int_0^s exp(L0 (s-u)) J exp(L0 u) c du in closed form
   * for 0 <= s <= horizon. Component a is sum_b J_ab c_b (E_b - E_a) / (l_b - l_a)
   * with E = exp(l s); pairs with |l_b - l_a| horizon below 1e-3 use a series.
   */
  struct FirstLayer {
    Matrix weights;  ///< J_ab c_b / (l_b - l_a), zero on near-degenerate pairs
    Vector row_sums;
    std::vector<std::pair<Index, Index>> close;
    Vector c;
  };

  FirstLayer first_layer_plan(const Vector& c) const {
    const Index n = c.size();
    FirstLayer plan{Matrix::Zero(n, n), Vector::Zero(n), {}, c};
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        const Complex coef = jump_(a, b) * c(b);
        if (coef == Complex(0.0)) continue;
        const Complex gap = eigenvalues_(b) - eigenvalues_(a);
        if (std::abs(gap) * horizon_ < 1e-3) {
          plan.close.emplace_back(a, b);
        } else {
          plan.weights(a, b) = coef / gap;
        }
      }
    }
    plan.row_sums = plan.weights.rowwise().sum();
    return plan;
  }

  Vector first_layer(const FirstLayer& plan, double s) const {
    const Vector e = (eigenvalues_ * s).array().exp().matrix();
    Vector out = plan.weights * e - (plan.row_sums.array() * e.array()).matrix();
    for (const auto& [a, b] : plan.close) {
      Index hi = a, lo = b;
      if (eigenvalues_(a).real() < eigenvalues_(b).real()) std::swap(hi, lo);
      out(a) += jump_(a, b) * plan.c(b) * s * e(hi) * phi1((eigenvalues_(lo) - eigenvalues_(hi)) * s);
    }
    return out;
  }

 private:
  static constexpr int kLadderDepth = 53;

  double horizon_;
  bool spectral_ = false;
  Vector eigenvalues_;
  Matrix to_coords_;
  Matrix jump_;
  Eigen::RowVectorXcd trace_row_;
  Matrix generator_;
  std::vector<Matrix> ladder_;
};

// sigma_k(s) = int_0^s exp(L0 (s-u)) J sigma_{k-1}(u) du,  sigma_0(s) = exp(L0 s) rho.
Vector jump_layer(const NoJumpPropagator& prop, const NoJumpPropagator::FirstLayer* plan,
                  const GaussLegendreRule& rule, const Vector& c0, int k, double s) {
  if (k == 0) return prop.propagate(c0, s);
  if (k == 1 && plan) return prop.first_layer(*plan, s);
  Vector acc = Vector::Zero(c0.size());
  if (s == 0.0) return acc;
  const double half = 0.5 * s;
  for (std::size_t l = 0; l < rule.nodes.size(); ++l) {
    const double u = half * (1.0 + rule.nodes[l]);
    const Vector inner = jump_layer(prop, plan, rule, c0, k - 1, u);
    acc += (half * rule.weights[l]) * prop.propagate(prop.jump(inner), s - u);
  }
  return acc;
}

std::vector<double> decomposition_at(const NoJumpPropagator& prop, const Vector& c0, double t, int max_jumps,
                                     int nodes) {
  const GaussLegendreRule rule = gauss_legendre(nodes);
  std::optional<NoJumpPropagator::FirstLayer> plan;
  if (prop.spectral()) plan = prop.first_layer_plan(c0);
  std::vector<double> out;
  out.reserve(max_jumps + 1);
  for (int k = 0; k <= max_jumps; ++k) out.push_back(prop.trace(jump_layer(prop, plan ? &*plan : nullptr, rule, c0, k, t)).real());
  return out;
}

}  // namespace

std::vector<double> jump_number_decomposition(const MonitoredSplit& split, const DensityMatrix& rho, double t,
                                              int max_jumps, const DysonOptions& options) {
  require_state_dim(split.no_jump, rho, "jump_number_decomposition");
  if (max_jumps < 0) throw InvalidArgument("jump_number_decomposition: K must be >= 0");
  if (!(t >= 0.0)) throw InvalidArgument("jump_number_decomposition: t must be >= 0");
  if (options.nodes < 1) throw InvalidArgument("jump_number_decomposition: need at least one node");

  const NoJumpPropagator prop(split.no_jump, split.total_jump(), t, options);
  const Vector c0 = prop.coords(rho.vectorized());
  std::vector<double> result = decomposition_at(prop, c0, t, max_jumps, options.nodes);
  if (options.check_convergence && max_jumps >= 1 && t > 0.0) {
    const std::vector<double> refined = decomposition_at(prop, c0, t, max_jumps, 2 * options.nodes);
    for (int k = 0; k <= max_jumps; ++k) {
      const double shift = std::abs(refined[k] - result[k]);
      if (shift > options.convergence_tol) {
        throw QuadratureError("jump_number_decomposition: P_" + std::to_string(k) + " shifted by " +
                              std::to_string(shift) + " when doubling the node count");
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

WaitingTimeEngine::WaitingTimeEngine(MonitoredSplit split)
    : split_(std::move(split)), solver_(split_.no_jump.matrix()) {}

const Superoperator& WaitingTimeEngine::jump(ChannelLabel channel) const {
  auto it = split_.jumps.find(channel);
  if (it == split_.jumps.end()) {
    throw InvalidArgument("channel " + std::string(to_string(channel)) + " is not monitored");
  }
  return it->second;
}

Vector WaitingTimeEngine::integrated_no_jump_state(const Vector& rho_vec) const { return solver_.solve(-rho_vec); }

double WaitingTimeEngine::first_jump_probability(ChannelLabel channel, const DensityMatrix& rho) const {
  require_state_dim(split_.no_jump, rho, "first_jump_probability");
  const Vector integrated = integrated_no_jump_state(rho.vectorized());
  return checked_probability(trace_of(jump(channel).apply(integrated)), "first_jump_probability");
}

double WaitingTimeEngine::two_jump_probability(ChannelLabel first, ChannelLabel second,
                                               const DensityMatrix& rho) const {
  require_state_dim(split_.no_jump, rho, "two_jump_probability");
  const Vector integrated = integrated_no_jump_state(rho.vectorized());
  const Vector after_first = jump(first).apply(integrated);
  const Vector after_second = solver_.solve(-after_first, chained_rounding(solver_, jump(first), integrated));
  return checked_probability(trace_of(jump(second).apply(after_second)), "two_jump_probability");
}

double WaitingTimeEngine::mean_first_jump_time(const DensityMatrix& rho) const {
  require_state_dim(split_.no_jump, rho, "mean_first_jump_time");
  const Complex t = trace_of(integrated_no_jump_state(rho.vectorized()));
  if (std::abs(t.imag()) > kImaginarySlack * std::max(1.0, std::abs(t.real())) || !(t.real() > 0.0)) {
    throw NumericalRangeError("mean_first_jump_time: non-positive or complex mean time");
  }
  return t.real();
}

JumpProbabilityTable WaitingTimeEngine::first_jump_table(const DensityMatrix& rho) const {
  require_state_dim(split_.no_jump, rho, "first_jump_table");
  const Vector integrated = integrated_no_jump_state(rho.vectorized());
  JumpProbabilityTable table;
  double total = 0.0;
  for (const auto& [label, sup] : split_.jumps) {
    const double p = checked_probability(trace_of(sup.apply(integrated)), "first_jump_table");
    table.entries[{label}] = p;
    total += p;
  }
  table.residual = 1.0 - total;
  return table;
}

JumpProbabilityTable WaitingTimeEngine::two_jump_table(const DensityMatrix& rho) const {
  require_state_dim(split_.no_jump, rho, "two_jump_table");
  const Vector integrated = integrated_no_jump_state(rho.vectorized());
  JumpProbabilityTable table;
  double total = 0.0;
  for (const auto& [first, first_sup] : split_.jumps) {
    const Vector after_first = first_sup.apply(integrated);
    const Vector after_second = solver_.solve(-after_first, chained_rounding(solver_, first_sup, integrated));
    for (const auto& [second, second_sup] : split_.jumps) {
      const double p = checked_probability(trace_of(second_sup.apply(after_second)), "two_jump_table");
      table.entries[{first, second}] = p;
      total += p;
    }
  }
  table.residual = 1.0 - total;
  // The last sequence computed directly must agree with its complement.
  const auto last = std::prev(table.entries.end());
  const double complement = 1.0 - (total - last->second);
  if (std::abs(complement - last->second) > kProbabilitySlack) {
    throw NumericalRangeError("two_jump_table: direct and complement values of the last sequence disagree by " +
                              std::to_string(std::abs(complement - last->second)));
  }
  return table;
}

}  // namespace dqdwtd
