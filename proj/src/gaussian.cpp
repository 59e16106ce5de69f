#include "thzqkd/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace thzqkd {

namespace {

// Index of quadrature `quad` of mode m under (q1, p1, q2, p2, ...) ordering.
inline Eigen::Index quad_index(int mode, Quadrature quad) {
  return 2 * mode + (quad == Quadrature::kQ ? 0 : 1);
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() % 2 != 0 || entries_.rows() == 0) {
    throw std::invalid_argument("CovarianceMatrix: need a non-empty square 2n x 2n matrix");
  }
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    throw std::invalid_argument("CovarianceMatrix: input not symmetric");
  }
}

CovarianceMatrix CovarianceMatrix::marginal(std::span<const int> keep) const {
  Eigen::MatrixXd out(2 * keep.size(), 2 * keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      out.block<2, 2>(2 * a, 2 * b) = entries_.block<2, 2>(2 * keep[a], 2 * keep[b]);
    }
  }
  return CovarianceMatrix(std::move(out));
}

bool CovarianceMatrix::is_physical() const {
  const SymplecticSpectrum spec = symplectic_spectrum_bruteforce(*this);
  return std::all_of(spec.values.begin(), spec.values.end(),
                     [](double v) { return v >= 1.0 - kPhysicalityTol; });
}

CovarianceMatrix tmsv_cm(double w) {
  if (!(w >= 1.0)) throw std::domain_error("tmsv_cm: thermal variance must be >= 1 SNU");
  const double c = std::sqrt(w * w - 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.diagonal() << w, w, w, w;
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix eve_output_cm(const ProtocolParams& params, double v_alice) {
  params.validate();
  if (!(v_alice >= 1.0)) throw std::domain_error("eve_output_cm: Alice variance must be >= 1 SNU");
  const double t = params.transmissivity;
  const double w = params.attack_noise;
  const double corr = std::sqrt(t * (w * w - 1.0));
  const double e_prime = t * w + (1.0 - t) * v_alice;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.diagonal() << w, w, e_prime, e_prime;
  m(0, 2) = m(2, 0) = corr;
  m(1, 3) = m(3, 1) = -corr;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix eve_bob_joint_cm(const ProtocolParams& params, double v_alice) {
  params.validate();
  const double t = params.transmissivity;
  const double w = params.attack_noise;
  const double eta = params.eta;
  const double s = params.trusted_noise;
  const CovarianceMatrix eve = eve_output_cm(params, v_alice);

  const double v_bob = eta * t * v_alice + eta * (1.0 - t) * w + (1.0 - eta) * s;
  const double c_e = std::sqrt(eta * (1.0 - t) * (w * w - 1.0));
  const double c_eprime = std::sqrt(eta * t * (1.0 - t)) * (w - v_alice);

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  m.topLeftCorner<4, 4>() = eve.matrix();
  m(4, 4) = m(5, 5) = v_bob;
  // e-b correlations carry the TMSV's Z signature; E'-b ones are diagonal.
  m(0, 4) = m(4, 0) = c_e;
  m(1, 5) = m(5, 1) = -c_e;
  m(2, 4) = m(4, 2) = c_eprime;
  m(3, 5) = m(5, 3) = c_eprime;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix eve_conditional_on_alice_cm(const ProtocolParams& params, double v_alice) {
  const CovarianceMatrix eve = eve_output_cm(params, v_alice);
  Eigen::MatrixXd m = eve.matrix();
  const double t = params.transmissivity;
  // Alice's encoding is classical: conditioning removes the modulation from
  // the measured quadrature only.
  m(2, 2) = t * params.attack_noise + (1.0 - t) * params.v0;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix eve_conditional_on_bob_cm(const ProtocolParams& params, double v_alice) {
  params.validate();
  if (!(v_alice >= 1.0)) {
    throw std::domain_error("eve_conditional_on_bob_cm: Alice variance must be >= 1 SNU");
  }
  const double t = params.transmissivity;
  if (!(t > 0.0 && t < 1.0)) {
    throw std::domain_error("eve_conditional_on_bob_cm: conditioning needs T in (0, 1)");
  }
  const double w = params.attack_noise;
  const double s_over_eta = (1.0 - params.eta) / params.eta * params.trusted_noise;
  const double theta = t * v_alice + (1.0 - t) * w + s_over_eta;
  const double corr = std::sqrt(t * (w * w - 1.0));

  const double a_qq = w - (1.0 - t) * (w * w - 1.0) / theta;
  // Conditioned E' q-entry: the difference of two O(v_alice) terms is
  // expanded analytically so no cancellation occurs at large modulation.
  const double k_over_t = ((1.0 - t) * w + s_over_eta) / t;
  const double c_qq = t * w + (1.0 - t) * (2.0 * w + k_over_t) -
                      (1.0 - t) * (w + k_over_t) * (w + k_over_t) / (v_alice + k_over_t);
  const double c_pp = t * w + (1.0 - t) * v_alice;
  // corr - gamma/theta collapses to corr (v_alice + s_over_eta) / theta.
  const double d_qq = corr * (v_alice + s_over_eta) / theta;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = a_qq;
  m(1, 1) = w;
  m(2, 2) = c_qq;
  m(3, 3) = c_pp;
  m(0, 2) = m(2, 0) = d_qq;
  m(1, 3) = m(3, 1) = -corr;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix homodyne_condition(const CovarianceMatrix& joint, int measured_mode,
                                    Quadrature quad) {
  const int n = joint.modes();
  if (measured_mode < 0 || measured_mode >= n) {
    throw std::invalid_argument("homodyne_condition: measured mode out of range");
  }
  if (n < 2) throw std::invalid_argument("homodyne_condition: need at least two modes");

  const Eigen::Index meas = quad_index(measured_mode, quad);
  const double b_xx = joint(meas, meas);
  if (!(b_xx > 0.0)) {
    throw std::domain_error("homodyne_condition: measured quadrature variance not positive");
  }

  std::vector<Eigen::Index> rest;
  rest.reserve(2 * (n - 1));
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (i != 2 * measured_mode && i != 2 * measured_mode + 1) rest.push_back(i);
  }

  Eigen::VectorXd c(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) c(i) = joint(rest[i], meas);

  Eigen::MatrixXd out(rest.size(), rest.size());
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) {
      out(a, b) = joint(rest[a], rest[b]) - c(a) * c(b) / b_xx;
    }
  }
  return CovarianceMatrix(std::move(out));
}

SymplecticSpectrum symplectic_spectrum_two_mode(const CovarianceMatrix& cm) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("symplectic_spectrum_two_mode: exactly two modes required");
  }
  const Eigen::MatrixXd& v = cm.matrix();
  const double det_a = v.block<2, 2>(0, 0).determinant();
  const double det_b = v.block<2, 2>(2, 2).determinant();
  const double det_c = v.block<2, 2>(0, 2).determinant();
  const double det_v = v.determinant();
  const double delta = det_a + det_b + 2.0 * det_c;

  double disc = delta * delta - 4.0 * det_v;
  if (disc < -1e-8 * std::max(delta * delta, 1.0)) {
    throw std::domain_error("symplectic_spectrum_two_mode: invariants numerically degenerate");
  }
  disc = std::max(disc, 0.0);
  const double big = 0.5 * (delta + std::sqrt(disc));
  // nu_minus via det V / nu_plus^2 avoids the cancellation in delta - sqrt.
  const double small = std::max(det_v, 0.0) / big;
  return {{std::sqrt(big), std::sqrt(small)}};
}

SymplecticSpectrum symplectic_spectrum_bruteforce(const CovarianceMatrix& cm) {
  const int n = cm.modes();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  const Eigen::MatrixXcd a =
      std::complex<double>(0.0, 1.0) * (omega * cm.matrix()).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_spectrum_bruteforce: eigensolver failed");
  }
  std::vector<double> mags(2 * n);
  for (int i = 0; i < 2 * n; ++i) mags[i] = std::abs(solver.eigenvalues()(i));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  // Eigenvalues come in +/- nu pairs; keep one representative of each.
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (mags[2 * i] + mags[2 * i + 1]);
  return {std::move(out)};
}

}  // namespace thzqkd
