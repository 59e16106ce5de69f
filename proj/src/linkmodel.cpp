#include "thzqkd/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "thzqkd/keyrate.hpp"
#include "thzqkd/planck.hpp"

namespace thzqkd {

AttenuationTable::AttenuationTable(std::vector<AttenuationBand> bands) : bands_(std::move(bands)) {
  std::sort(bands_.begin(), bands_.end(),
            [](const AttenuationBand& a, const AttenuationBand& b) { return a.f_min_hz < b.f_min_hz; });
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const AttenuationBand& b = bands_[i];
    if (!(b.f_min_hz > 0.0) || !(b.f_max_hz > b.f_min_hz)) {
      throw std::invalid_argument("AttenuationTable: band limits must satisfy 0 < f_min < f_max");
    }
    if (!(b.delta_db_per_km > 0.0)) {
      throw std::invalid_argument("AttenuationTable: attenuation must be positive");
    }
    if (i > 0 && b.f_min_hz < bands_[i - 1].f_max_hz) {
      throw std::invalid_argument("AttenuationTable: bands overlap");
    }
  }
}

const AttenuationTable& AttenuationTable::clear_atmosphere() {
  // Spot windows widened to +/-5%; the 15-34 and 40-55 THz windows as given.
  static const AttenuationTable table({
      {95e9, 105e9, 0.6},
      {190e9, 210e9, 1.2},
      {0.95e12, 1.05e12, 1e2},
      {9.5e12, 10.5e12, 1e3},
      {15e12, 34e12, 50.0},
      {40e12, 55e12, 1.77e3},
  });
  return table;
}

AttenuationTable AttenuationTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("AttenuationTable: cannot open " + path);
  return from_csv_stream(in, path);
}

AttenuationTable AttenuationTable::from_csv_stream(std::istream& in, const std::string& origin) {
  std::vector<AttenuationBand> bands;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    AttenuationBand band{};
    if (!(row >> band.f_min_hz >> band.f_max_hz >> band.delta_db_per_km)) {
      // tolerate a header row
      if (line_no == 1 && line.find("f_min_hz") != std::string::npos) continue;
      throw std::runtime_error("AttenuationTable: bad row " + std::to_string(line_no) + " in " + origin);
    }
    bands.push_back(band);
  }
  if (bands.empty()) throw std::runtime_error("AttenuationTable: no bands in " + origin);
  return AttenuationTable(std::move(bands));
}

double AttenuationTable::delta_db_per_km(double frequency_hz) const {
  for (const AttenuationBand& b : bands_) {
    if (frequency_hz >= b.f_min_hz && frequency_hz <= b.f_max_hz) return b.delta_db_per_km;
  }
  std::ostringstream msg;
  msg << "no attenuation band covers " << frequency_hz << " Hz";
  throw UnresolvedBandError(msg.str());
}

double transmissivity_from_distance(double distance_m, double delta_db_per_km) {
  if (!(distance_m >= 0.0)) throw std::domain_error("transmissivity_from_distance: negative distance");
  if (!(delta_db_per_km > 0.0)) throw std::domain_error("transmissivity_from_distance: delta must be positive");
  return std::pow(10.0, -delta_db_per_km * (distance_m / 1000.0) / 10.0);
}

double distance_from_transmissivity(double transmissivity, double delta_db_per_km) {
  if (!(transmissivity > 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("distance_from_transmissivity: transmissivity outside (0, 1]");
  }
  if (!(delta_db_per_km > 0.0)) throw std::domain_error("distance_from_transmissivity: delta must be positive");
  return -10.0 * std::log10(transmissivity) / delta_db_per_km * 1000.0;
}

double hiding_attack_rate(double v0, double transmissivity, double eta, Reconciliation mode,
                          TrustedNoisePolicy s_policy, double extra_noise) {
  ProtocolParams p;
  p.v0 = v0;
  p.transmissivity = transmissivity;
  p.attack_noise = v0 + extra_noise;
  p.eta = eta;
  if (mode == Reconciliation::kDirect) {
    p.trusted_noise = (s_policy == TrustedNoisePolicy::kMatchV0) ? v0 : 1.0;
    return rate_dr(p).rate;
  }
  switch (s_policy) {
    case TrustedNoisePolicy::kUnit:
      p.trusted_noise = 1.0;
      return rate_rr(p).rate;
    case TrustedNoisePolicy::kMatchV0:
      p.trusted_noise = v0;
      return rate_rr(p).rate;
    case TrustedNoisePolicy::kOptimized:
      return rate_rr_optimized(p).rate;
  }
  throw std::logic_error("hiding_attack_rate: unknown trusted-noise policy");
}

ThresholdResult security_threshold_frequency(double transmissivity, double eta,
                                             Reconciliation mode, TrustedNoisePolicy s_policy,
                                             double temperature_k) {
  if (!(transmissivity > 0.0 && transmissivity < 1.0)) {
    throw std::domain_error("security_threshold_frequency: transmissivity outside (0, 1)");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("security_threshold_frequency: eta outside (0, 1]");
  }

  const auto rate_at = [&](double log_f) {
    const double f = std::exp(log_f);
    const double v0 = preparation_variance({f, temperature_k}).v0;
    return hiding_attack_rate(v0, transmissivity, eta, mode, s_policy);
  };

  const double lo = std::log(kThresholdBracketMinHz);
  const double hi = std::log(kThresholdBracketMaxHz);

  // Coarse scan to bracket the sign changes, then bisect the lowest one.
  int crossings = 0;
  double left = lo, right = hi;
  double prev = rate_at(lo);
  bool found = false;
  for (int i = 1; i < kCoarseScanPoints; ++i) {
    const double x = lo + (hi - lo) * i / (kCoarseScanPoints - 1);
    const double cur = rate_at(x);
    if ((prev <= 0.0) != (cur <= 0.0)) {
      ++crossings;
      if (!found) {
        left = lo + (hi - lo) * (i - 1) / (kCoarseScanPoints - 1);
        right = x;
        found = true;
      }
    }
    prev = cur;
  }
  if (!found) return {std::nullopt, false};

  double f_left = rate_at(left);
  for (int i = 0; i < kBisectionIterations; ++i) {
    const double mid = 0.5 * (left + right);
    const double f_mid = rate_at(mid);
    if ((f_left <= 0.0) == (f_mid <= 0.0)) {
      left = mid;
      f_left = f_mid;
    } else {
      right = mid;
    }
  }
  return {std::exp(0.5 * (left + right)), crossings > 1};
}

double plob_threshold_frequency(double transmissivity, double temperature_k) {
  if (!(transmissivity > 0.0 && transmissivity < 1.0)) {
    throw std::domain_error("plob_threshold_frequency: transmissivity outside (0, 1)");
  }
  const double v0_threshold = (1.0 + transmissivity) / (1.0 - transmissivity);
  return frequency_from_variance(v0_threshold, temperature_k);
}

MaxDistanceResult max_distance(double frequency_hz, double eta, Reconciliation mode,
                               TrustedNoisePolicy s_policy, double extra_noise,
                               const AttenuationTable& table, double temperature_k) {
  const double delta = table.delta_db_per_km(frequency_hz);
  const double v0 = preparation_variance({frequency_hz, temperature_k}).v0;
  const auto rate_at = [&](double d_m) {
    const double t = transmissivity_from_distance(d_m, delta);
    return hiding_attack_rate(v0, t, eta, mode, s_policy, extra_noise);
  };

  if (!(rate_at(0.0) > 0.0)) return {0.0, false};
  if (rate_at(kMaxDistanceBracketM) > 0.0) return {kMaxDistanceBracketM, true};

  double lo = 0.0, hi = kMaxDistanceBracketM;
  for (int i = 0; i < kBisectionIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (rate_at(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), true};
}

}  // namespace thzqkd
