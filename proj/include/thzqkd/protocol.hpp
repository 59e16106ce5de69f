#pragma once

namespace thzqkd {

// One-way thermal-state protocol over a thermal-loss channel with a noisy
// homodyne receiver. All variances in SNU.
struct ProtocolParams {
  double v0 = 1.0;             // preparation (thermal background) variance
  double va = 1e8;             // Gaussian modulation variance
  double transmissivity = 0.5; // channel transmissivity T in [0, 1]
  double attack_noise = 1.0;   // thermal variance W of the injected TMSV, >= 1
  double eta = 1.0;            // detector efficiency in (0, 1]
  double trusted_noise = 1.0;  // detector thermal variance S, >= 1 (not Eve's)

  double total_alice_variance() const { return v0 + va; }

  // Throws std::domain_error when a field is out of range.
  void validate() const;
};

enum class Reconciliation { kDirect, kReverse };

}  // namespace thzqkd
