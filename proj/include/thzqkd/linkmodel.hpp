#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzqkd/protocol.hpp"

namespace thzqkd {

class UnresolvedBandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttenuationBand {
  double f_min_hz;
  double f_max_hz;
  double delta_db_per_km;
};

// Piecewise-constant atmospheric attenuation. Queries in a gap between bands
// are hard errors; no extrapolation or interpolation is invented.
class AttenuationTable {
 public:
  explicit AttenuationTable(std::vector<AttenuationBand> bands);

  // Clear-weather table: spot windows at 100 GHz (0.6 dB/km), 200 GHz (1.2),
  // 1 THz (1e2), 10 THz (1e3), plus the 15-34 THz window (50) and the
  // 40-55 THz window (1.77e3).
  static const AttenuationTable& clear_atmosphere();

  // CSV columns: f_min_hz, f_max_hz, delta_db_per_km.
  static AttenuationTable from_csv(const std::string& path);
  static AttenuationTable from_csv_stream(std::istream& in, const std::string& origin);

  double delta_db_per_km(double frequency_hz) const;  // throws UnresolvedBandError
  const std::vector<AttenuationBand>& bands() const { return bands_; }

 private:
  std::vector<AttenuationBand> bands_;
};

double transmissivity_from_distance(double distance_m, double delta_db_per_km);
double distance_from_transmissivity(double transmissivity, double delta_db_per_km);

enum class TrustedNoisePolicy { kUnit, kMatchV0, kOptimized };

struct ThresholdResult {
  std::optional<double> frequency_hz;  // smallest root of rate(f) = 0
  bool multiple_roots = false;
};

// Root-finding bracket and iteration policy shared by the solvers below.
inline constexpr double kThresholdBracketMinHz = 10e9;
inline constexpr double kThresholdBracketMaxHz = 1000e12;
inline constexpr int kCoarseScanPoints = 256;
inline constexpr int kBisectionIterations = 80;
inline constexpr double kMaxDistanceBracketM = 100e3;
inline constexpr double kDefaultThresholdTemperatureK = 296.0;

/// Smallest frequency at which the selected rate crosses zero under the
/// hiding attack W = V0(f), by coarse scan plus bisection in log-frequency.
/// Empty when no sign change exists inside the bracket.
ThresholdResult security_threshold_frequency(double transmissivity, double eta,
                                             Reconciliation mode, TrustedNoisePolicy s_policy,
                                             double temperature_k = kDefaultThresholdTemperatureK);

/// Frequency below which even the channel capacity bound vanishes: the
/// threshold occupation nbar = T/(1-T) mapped to Hz through the thermal
/// variance V0 = (1+T)/(1-T).
double plob_threshold_frequency(double transmissivity,
                                double temperature_k = kDefaultThresholdTemperatureK);

struct MaxDistanceResult {
  double distance_m = 0.0;
  bool secure_at_zero = false;  // false means the rate is already negative at d=0
};

/// Largest distance with positive rate at the given carrier, by bisection on
/// distance through the attenuation table. `extra_noise` (SNU) is added to
/// the attack variance at the channel input, the converter-noise injection
/// point.
MaxDistanceResult max_distance(double frequency_hz, double eta, Reconciliation mode,
                               TrustedNoisePolicy s_policy, double extra_noise = 0.0,
                               const AttenuationTable& table = AttenuationTable::clear_atmosphere(),
                               double temperature_k = kDefaultThresholdTemperatureK);

/// Rate of the selected mode/policy under the hiding attack, used by both
/// solvers above and exposed for dense-scan cross-checks.
double hiding_attack_rate(double v0, double transmissivity, double eta, Reconciliation mode,
                          TrustedNoisePolicy s_policy, double extra_noise = 0.0);

}  // namespace thzqkd
