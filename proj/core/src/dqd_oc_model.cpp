#include "dqdwtd/dqd_oc_model.hpp"

#include <cmath>
#include <utility>

#include "dqdwtd/errors.hpp"

namespace dqdwtd {

double ModelParams::omega() const noexcept { return std::sqrt(4.0 * t_c * t_c + epsilon * epsilon); }

void ModelParams::validate() const {
  if (!(gamma > 0.0)) throw InvalidArgument("ModelParams: gamma must be > 0");
  if (!(kappa > 0.0)) throw InvalidArgument("ModelParams: kappa must be > 0");
  if (!(g >= 0.0)) throw InvalidArgument("ModelParams: g must be >= 0");
  if (!(xi >= 0.0)) throw InvalidArgument("ModelParams: xi must be >= 0");
  if (n_max < 0) throw InvalidArgument("ModelParams: n_max must be >= 0");
  for (double v : {delta_d, delta_r, epsilon, t_c}) {
    if (!std::isfinite(v)) throw InvalidArgument("ModelParams: non-finite detuning or dot energy");
  }
}

ModelParams ModelParams::from_dimensionless(double alpha, double cooperativity, int n_max, double kappa) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (!(cooperativity >= 0.0)) throw InvalidArgument("cooperativity must be >= 0");
  ModelParams p;
  p.kappa = kappa;
  p.gamma = alpha * kappa;
  p.g = 0.5 * std::sqrt(cooperativity * p.gamma * kappa);
  p.n_max = n_max;
  p.validate();
  return p;
}

DqdOcModel build_model(const ModelParams& params) {
  params.validate();
  const DqdOperators dot = dqd_operators();
  const Operator a = annihilation(params.n_max);
  const Operator ad = a.adjoint();
  const Operator dot_id = Operator::identity(3);
  const Operator fock_id = Operator::identity(params.n_max + 1);

  Operator h = kron(dot.sigma3, fock_id) * Complex(0.5 * params.delta_d);
  h += kron(dot_id, ad * a) * Complex(params.delta_r);
  h += (kron(dot.sigma_minus, ad) + kron(dot.sigma_plus, a)) * Complex(params.g);
  h += kron(dot_id, ad + a) * Complex(params.xi);

  DqdOcModel model;
  model.hamiltonian = std::move(h);
  model.layout = {3, params.n_max + 1};
  model.channels = {
      {ChannelLabel::electron_in, kron(dot.s_g.adjoint(), fock_id), params.gamma, false},
      {ChannelLabel::electron_out, kron(dot.s_e, fock_id), params.gamma, true},
      {ChannelLabel::photon_leak, kron(dot_id, a), params.kappa, true},
  };
  if (params.xi > 0.0) {
    model.warnings.push_back("pump xi > 0: Fock cutoff n_max = " + std::to_string(params.n_max) +
                             " truncates the dynamics; check convergence in n_max");
  }
  return model;
}

DensityMatrix initial_state(int photons, int n_max) {
  if (photons < 0) throw InvalidArgument("initial_state: photon number must be >= 0");
  if (photons > n_max) throw InvalidArgument("initial_state: photon number exceeds the Fock cutoff");
  const Index dim = 3 * static_cast<Index>(n_max + 1);
  Matrix rho = Matrix::Zero(dim, dim);
  const Index k = product_index(0, photons, n_max);
  rho(k, k) = 1.0;
  return DensityMatrix(Operator(std::move(rho)), BasisLayout{3, n_max + 1});
}

PhotonScenario photon_scenario(ModelParams params, int photons) {
  if (photons < 0) throw InvalidArgument("photon_scenario: photon number must be >= 0");
  params.xi = 0.0;
  params.n_max = photons;
  DqdOcModel model = build_model(params);
  MonitoredSplit split = split_monitored(model.hamiltonian, model.channels);
  DensityMatrix rho = initial_state(photons, photons);
  return {params, std::move(model), std::move(rho), WaitingTimeEngine(std::move(split))};
}

double closed_form_pe(double alpha, double c) {
  const double ap1 = alpha + 1.0;
  return c / (c + 1.0) * (alpha * alpha) / (ap1 * ap1);
}

double closed_form_mean_time(double alpha, double c) {
  const double ap1sq = (alpha + 1.0) * (alpha + 1.0);
  return (ap1sq + c * (3.0 * alpha + 1.0)) / (ap1sq * (c + 1.0));
}

TwoPhotonClosedForm closed_form_two_photon(double alpha, double c) {
  const double a = alpha;
  const double ap1sq = (1.0 + a) * (1.0 + a);
  const double coupled = 1.0 + a + c * a;
  const double quad = (2.0 + a) * (3.0 + a);  // 6 + 5a + a^2
  const double common = (1.0 + c) * ap1sq * quad * coupled;

  TwoPhotonClosedForm out;
  out.p_ee = c * c * std::pow(a, 5) / common;
  out.p_egamma = c * a * a * a * (c + 2.0 * c * a + ap1sq) / common;
  out.p_gammae = c * a * a * (12.0 + a * (3.0 + a) * (7.0 + a) + c * a * (9.0 + 5.0 * a)) / common;
  out.p_gammagamma = 1.0 - out.p_ee - out.p_egamma - out.p_gammae;
  out.p_e1 = c * a * a * a / (quad * coupled);
  out.p_e2 = c * a * a *
             (12.0 + 3.0 * (7.0 + 3.0 * c) * a + 5.0 * (2.0 + c) * a * a + (1.0 + c) * a * a * a) / common;
  return out;
}

ClosedFormTable closed_form_table(double alpha, double c) {
  ClosedFormTable t;
  t.p_e = closed_form_pe(alpha, c);
  t.p_gamma = 1.0 - t.p_e;
  t.kappa_t1 = closed_form_mean_time(alpha, c);
  t.two_photon = closed_form_two_photon(alpha, c);
  return t;
}

double efficiency_detuned(const ModelParams& p) {
  const double omega = p.omega();
  if (omega == 0.0) throw DegenerateParametersError("efficiency_detuned: Omega = 0");
  const double g2 = p.g * p.g;
  const double lorentz = 4.0 * p.delta_d * p.delta_d + p.gamma * p.gamma;
  const double shift = p.delta_r - 4.0 * g2 * p.delta_d / lorentz;
  const double width = 0.5 * p.kappa + 2.0 * g2 * p.gamma / lorentz;
  return 4.0 * p.kappa * g2 * p.gamma * p.epsilon / (omega * lorentz * (shift * shift + width * width));
}

double efficiency_resonant(double epsilon, double t_c, double c) {
  const double omega = dqd_eigenbasis(epsilon, t_c).omega;
  return 4.0 * epsilon / omega * c / ((1.0 + c) * (1.0 + c));
}

}  // namespace dqdwtd
