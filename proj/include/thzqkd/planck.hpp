#pragma once

namespace thzqkd {

// CODATA 2018 exact values.
inline constexpr double kPlanckConstant = 6.62607015e-34;    // J s
inline constexpr double kBoltzmannConstant = 1.380649e-23;   // J/K
inline constexpr double kDefaultTemperatureK = 296.0;        // K

// Quadrature variances are expressed in shot-noise units (SNU), vacuum = 1.
struct EnvironmentSpec {
  double frequency_hz;
  double temperature_k = kDefaultTemperatureK;
};

struct PreparationVariance {
  double v0;    // SNU, = 2*nbar + 1
  double nbar;  // mean thermal photon number
};

/// Mean thermal photon number of a single bosonic mode at the given
/// ordinary frequency (Hz) and temperature (K).
double mean_thermal_photons(const EnvironmentSpec& env);

/// Thermal preparation variance V0 = 2*nbar + 1 of the source mode.
PreparationVariance preparation_variance(const EnvironmentSpec& env);

/// Inverse of the occupation map: the frequency (Hz) whose thermal variance
/// at `temperature_k` equals `v0`. Requires v0 > 1 (no finite frequency has
/// a vacuum or sub-vacuum thermal variance).
double frequency_from_variance(double v0, double temperature_k = kDefaultTemperatureK);

/// Entropy of a thermal state with symplectic eigenvalue x >= 1, in bits.
/// Inputs within 1e-9 below 1 are treated as round-off and clamped to 1;
/// anything lower is rejected as unphysical.
double entropy_h(double x);

/// Channel mixing of two variances: T*x + (1-T)*y.
double lambda_mix(double x, double y, double transmissivity);

}  // namespace thzqkd
