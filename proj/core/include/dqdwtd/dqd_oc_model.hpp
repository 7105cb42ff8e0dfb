#pragma once

#include <string>
#include <vector>

#include "dqdwtd/liouvillian.hpp"
#include "dqdwtd/operator_algebra.hpp"
#include "dqdwtd/wtd_engine.hpp"

namespace dqdwtd {

/**
 * \brief Physical parameters of the double-dot / cavity photodetector.
 *
 * Frequencies share one arbitrary unit; the dimensionless combinations are
 * the cooperativity C = 4 g^2 / (Gamma kappa) and alpha = Gamma / kappa.
 */
struct ModelParams {
  double delta_d = 0.0;  ///< dot detuning from the pump, Omega - omega_l
  double delta_r = 0.0;  ///< cavity detuning from the pump, omega_r - omega_l
  double g = 0.0;        ///< dot-cavity coupling
  double xi = 0.0;       ///< pump strength
  double gamma = 1.0;    ///< electron injection/extraction rate
  double kappa = 1.0;    ///< photon loss rate
  double epsilon = 0.0;  ///< dot energy offset
  double t_c = 0.0;      ///< interdot tunnelling
  int n_max = 1;         ///< Fock cutoff

  double cooperativity() const noexcept { return 4.0 * g * g / (gamma * kappa); }
  double alpha() const noexcept { return gamma / kappa; }
  double omega() const noexcept;

  /// Throws InvalidArgument unless gamma, kappa > 0 and g, xi, n_max >= 0.
  void validate() const;

  /// Resonant, undriven parameters with Gamma = alpha kappa and g = sqrt(C Gamma kappa) / 2.
  static ModelParams from_dimensionless(double alpha, double cooperativity, int n_max, double kappa = 1.0);
};

struct DqdOcModel {
  Operator hamiltonian;
  /// electron_in (s_g^dagger, Gamma, unmonitored), electron_out (s_e, Gamma), photon_leak (a, kappa).
  std::vector<JumpChannel> channels;
  BasisLayout layout;
  /// Non-fatal diagnostics, e.g. the Fock cutoff no longer being exact with a pump.
  std::vector<std::string> warnings;
};

/// Rotating-frame Hamiltonian and channels on dot (x) Fock(n_max), dot factor first.
DqdOcModel build_model(const ModelParams& params);

/// Index of |z, n> in the product basis, z = 0 (empty), 1 (g), 2 (e).
inline Index product_index(int dot_state, int photons, int n_max) {
  return static_cast<Index>(dot_state) * (n_max + 1) + photons;
}

/// |0><0| (x) |n><n|.
DensityMatrix initial_state(int photons, int n_max);

/**
 * \brief n-photon waiting-time scenario: pump off, Fock cutoff equal to n.
 *
 * Excitation number is conserved by the undriven Hamiltonian and lowered by
 * every jump, so n_max = n is exact.
 */
struct PhotonScenario {
  ModelParams params;
  DqdOcModel model;
  DensityMatrix initial;
  WaitingTimeEngine engine;
};
PhotonScenario photon_scenario(ModelParams params, int photons);

// Closed forms, resonant and undriven.

double closed_form_pe(double alpha, double cooperativity);
/// kappa <t_1> for a single photon.
double closed_form_mean_time(double alpha, double cooperativity);

struct TwoPhotonClosedForm {
  double p_ee = 0.0;
  double p_egamma = 0.0;
  double p_gammae = 0.0;
  double p_gammagamma = 0.0;
  double p_e1 = 0.0;  ///< first click is an electron
  double p_e2 = 0.0;  ///< second click is an electron
};
TwoPhotonClosedForm closed_form_two_photon(double alpha, double cooperativity);

struct ClosedFormTable {
  double p_e = 0.0;
  double p_gamma = 0.0;
  double kappa_t1 = 0.0;
  TwoPhotonClosedForm two_photon;
};
ClosedFormTable closed_form_table(double alpha, double cooperativity);

/// Steady-state detection efficiency with detunings (phonon rates zero).
double efficiency_detuned(const ModelParams& params);
/// (4 epsilon / Omega) C / (1 + C)^2.
double efficiency_resonant(double epsilon, double t_c, double cooperativity);

}  // namespace dqdwtd
