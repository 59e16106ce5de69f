#pragma once

#include "thzqkd/gaussian.hpp"
#include "thzqkd/protocol.hpp"

namespace thzqkd {

// Channel limits are tagged rather than returned as bare non-finite rates.
enum class RateStatus { kFinite, kPlusInfinite, kMinusInfinite };

struct KeyRateResult {
  double rate = 0.0;                // bits per channel use, signed
  double mutual_information = 0.0;  // I(a:b), bits
  double holevo = 0.0;              // Eve's Holevo bound, bits
  SymplecticSpectrum total_spectrum;
  SymplecticSpectrum conditional_spectrum;
  Reconciliation reconciliation = Reconciliation::kDirect;
  double trusted_noise_choice = 1.0;
  RateStatus status = RateStatus::kFinite;

  bool finite() const { return status == RateStatus::kFinite; }
};

/// Alice-Bob mutual information in bits. The asymptotic flag replaces Bob's
/// total variance by its large-modulation numerator eta*T*va.
double mutual_information(const ProtocolParams& params, bool asymptotic = false);

/// Asymptotic (large-modulation) direct-reconciliation rate.
KeyRateResult rate_dr(const ProtocolParams& params);

/// Asymptotic reverse-reconciliation rate.
KeyRateResult rate_rr(const ProtocolParams& params);

/// Reverse-reconciliation rate maximized over detector trusted noise
/// S in {1, v0}; the chosen value is recorded in trusted_noise_choice.
KeyRateResult rate_rr_optimized(const ProtocolParams& params);

/// Full finite-modulation rate from the actual symplectic spectra of Eve's
/// total and conditional states; no asymptotic shortcuts. Serves as the
/// reference the asymptotic formulas are checked against.
KeyRateResult rate_finite_modulation(const ProtocolParams& params, Reconciliation reconciliation);

/// Secret-key capacity upper bound of the thermal-loss channel, in bits.
/// Zero when nbar >= T/(1-T); +infinity at T=1 and 0 at T=0 (limit markers).
double plob_bound(double transmissivity, double nbar);

}  // namespace thzqkd
