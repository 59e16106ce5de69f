#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "thzqkd/keyrate.hpp"
#include "thzqkd/protocol.hpp"

namespace thzqkd {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Electro-opto-mechanical converter: a terahertz and an optical cavity mode,
// each beam-splitter-coupled to a shared phonon mode, in the frame rotating
// at the three resonance frequencies. All rates in 1/s.
struct ConverterParams {
  double g_o = 1e8;       // optical-phonon coupling
  double g_t = 1e8;       // terahertz-phonon coupling
  double kappa_o = 1e9;   // optical out-coupling
  double kappa_t = 1e9;   // terahertz out-coupling
  double kappa_m = 0.0;   // phonon (quasiparticle) damping, >= 0
  double omega_m = 0.0;   // phonon frequency; recorded only, the rotating
                          // frame removes it from the dynamics
  double n_bath_o = 0.0;  // bath occupations feeding each damping port
  double n_bath_t = 0.0;
  double n_bath_m = 0.0;

  void validate() const;
};

// Quadrature ordering (q_o, q_t, q_m, p_o, p_t, p_m).
struct ConverterDynamics {
  Eigen::Matrix<double, 6, 6> drift;           // M
  Eigen::Matrix<double, 6, 6> input_coupling;  // N
};

ConverterDynamics build_dynamics(const ConverterParams& params);

struct FrequencyResponse {
  double omega = 0.0;  // offset from the carrier, 1/s
  Eigen::Matrix<std::complex<double>, 6, 6> h;
  std::complex<double> transmissivity;  // q-sector THz<->optical element
  double magnitude_sq = 0.0;
  double phase_rad = 0.0;      // relative to the zero-frequency response sign
  double group_delay_s = 0.0;  // numeric dphase/domega
  double condition_estimate = 0.0;
};

/// Full input-output response H(omega) = -N (M + i omega)^-1 N - 1, with the
/// scalar transmissivity extracted from the terahertz->optical entry after
/// asserting reciprocity.
FrequencyResponse frequency_response(const ConverterParams& params, double omega);

/// Algebraic form of the same transmissivity, the second route the matrix
/// path is checked against.
std::complex<double> transmissivity_closed_form(const ConverterParams& params, double omega);

/// |t(0)| in closed form.
double transmissivity_zero_frequency(const ConverterParams& params);

struct ResponseShape {
  double magnitude_sq = 0.0;
  double phase_rad = 0.0;
  double group_delay_s = 0.0;
  bool principal_branch = true;  // false once |omega| reaches g
};

/// Closed-form magnitude, phase and group delay in the symmetric limit
/// (g_o = g_t, kappa_o = kappa_t, negligible phonon damping).
ResponseShape magnitude_phase_delay(const ConverterParams& params, double omega);

/// Largest offset frequency at which both |t|^2 and the group delay stay
/// within `deviation_tolerance` of their zero-frequency values. Symmetric
/// limit only.
double useful_bandwidth(const ConverterParams& params, double deviation_tolerance);

struct SteadyStateOccupations {
  double n_o = 0.0;
  double n_t = 0.0;
  double n_m = 0.0;
  double lyapunov_residual = 0.0;  // max-norm of M V + V M^T + D
};

/// Stationary intracavity occupations from the Lyapunov equation
/// M V + V M^T + D = 0 with diffusion D = N diag(2 n_bath + 1) N^T.
SteadyStateOccupations steady_state_occupations(const ConverterParams& params);

/// Cryogenic operating point: couplings and a 1 K phonon bath calibrated so
/// the terahertz mode holds 1.72 thermal photons in steady state.
ConverterParams cryo_1k_preset();

// Where the converter's thermal photons enter the channel model. Input
// referencing adds V_c to the attack variance before the beam splitter;
// output referencing makes the same noise appear undiluted at Bob's side.
enum class NoiseInjection { kChannelInput, kChannelOutput };

/// Reverse-reconciliation rate with converter noise V_c = 2 n_thz treated as
/// extra thermal noise under Eve's control, optimized over trusted noise.
KeyRateResult noisy_rate_rr(const ProtocolParams& protocol, double n_thz,
                            NoiseInjection injection = NoiseInjection::kChannelInput);

}  // namespace thzqkd
