#include "thzqkd/planck.hpp"

#include <cmath>
#include <stdexcept>

namespace thzqkd {

double mean_thermal_photons(const EnvironmentSpec& env) {
  if (!(env.frequency_hz > 0.0)) {
    throw std::domain_error("mean_thermal_photons: frequency must be positive");
  }
  if (!(env.temperature_k > 0.0)) {
    throw std::domain_error("mean_thermal_photons: temperature must be positive");
  }
  const double x = kPlanckConstant * env.frequency_hz / (kBoltzmannConstant * env.temperature_k);
  return 1.0 / std::expm1(x);
}

PreparationVariance preparation_variance(const EnvironmentSpec& env) {
  const double nbar = mean_thermal_photons(env);
  return {2.0 * nbar + 1.0, nbar};
}

double frequency_from_variance(double v0, double temperature_k) {
  if (!(temperature_k > 0.0)) {
    throw std::domain_error("frequency_from_variance: temperature must be positive");
  }
  if (!(v0 > 1.0)) {
    throw std::domain_error("frequency_from_variance: no finite frequency has v0 <= 1");
  }
  const double nbar = 0.5 * (v0 - 1.0);
  return kBoltzmannConstant * temperature_k / kPlanckConstant * std::log1p(1.0 / nbar);
}

double entropy_h(double x) {
  if (x < 1.0) {
    if (x < 1.0 - 1e-9) {
      throw std::domain_error("entropy_h: symplectic eigenvalue below 1");
    }
    x = 1.0;  // absorb spectrum round-off
  }
  const double p = 0.5 * (x + 1.0);
  const double m = 0.5 * (x - 1.0);
  if (m == 0.0) return 0.0;
  // p log2 p - m log2 m rearranged so large arguments do not cancel
  return std::log2(p) + m * std::log1p(1.0 / m) / M_LN2;
}

double lambda_mix(double x, double y, double transmissivity) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("lambda_mix: transmissivity outside [0, 1]");
  }
  return transmissivity * x + (1.0 - transmissivity) * y;
}

}  // namespace thzqkd
