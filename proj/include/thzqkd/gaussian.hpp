#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thzqkd/protocol.hpp"

namespace thzqkd {

// Real symmetric 2n x 2n second-moment matrix of a zero-mean Gaussian state,
// quadrature ordering (q1, p1, ..., qn, pn), SNU convention (vacuum = 1).
class CovarianceMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kPhysicalityTol = 1e-9;

  // Throws std::invalid_argument unless `entries` is square, of even
  // dimension, and symmetric to kSymmetryTol.
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  int modes() const { return static_cast<int>(entries_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  double operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  // Reduced state of the listed modes (0-based), in the given order.
  CovarianceMatrix marginal(std::span<const int> keep) const;

  // Bona-fide check: every symplectic eigenvalue >= 1 - kPhysicalityTol.
  bool is_physical() const;

 private:
  Eigen::MatrixXd entries_;
};

struct SymplecticSpectrum {
  std::vector<double> values;  // sorted descending, one per mode
};

enum class Quadrature { kQ, kP };

/// Two-mode squeezed vacuum with thermal marginals w >= 1.
CovarianceMatrix tmsv_cm(double w);

/// Eve's output modes (e, E') after the entangling-cloner beam splitter,
/// for total Alice variance `v_alice` entering the channel.
CovarianceMatrix eve_output_cm(const ProtocolParams& params, double v_alice);

/// Joint state of Eve's modes (e, E') and Bob's detected mode b.
CovarianceMatrix eve_bob_joint_cm(const ProtocolParams& params, double v_alice);

/// Eve's output modes conditioned on Alice's classical encoding: the
/// modulation contribution is removed from the measured quadrature of E'
/// only, since the key uses one quadrature per channel use.
CovarianceMatrix eve_conditional_on_alice_cm(const ProtocolParams& params, double v_alice);

/// Eve's output modes conditioned on Bob's homodyne outcome, assembled from
/// the algebraic block forms of the conditioned state. Equals
/// homodyne_condition applied to eve_bob_joint_cm, but the conditioned
/// entries are evaluated without the large-modulation cancellation, so the
/// result stays accurate up to v_alice ~ 1e12.
CovarianceMatrix eve_conditional_on_bob_cm(const ProtocolParams& params, double v_alice);

/// Gaussian homodyne update: removes `measured_mode` and applies the
/// rank-one correction V - c c^T / b_xx, where b_xx is the measured
/// quadrature variance (the pseudo-inverse of the singular projected block).
CovarianceMatrix homodyne_condition(const CovarianceMatrix& joint, int measured_mode,
                                    Quadrature quad = Quadrature::kQ);

/// Closed-form spectrum of a two-mode CM from the symplectic invariants
/// delta = det A + det B + 2 det C and det V.
SymplecticSpectrum symplectic_spectrum_two_mode(const CovarianceMatrix& cm);

/// Spectrum of any CM as |eig(i Omega V)|; the reference route the closed
/// forms are checked against.
SymplecticSpectrum symplectic_spectrum_bruteforce(const CovarianceMatrix& cm);

}  // namespace thzqkd
