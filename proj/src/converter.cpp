#include "thzqkd/converter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace thzqkd {

namespace {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix6cd = Eigen::Matrix<std::complex<double>, 6, 6>;
using complexd = std::complex<double>;

constexpr double kPivotRatioFloor = 1e-12;
constexpr int kBisectIterations = 80;

bool symmetric_limit(const ConverterParams& p) {
  const double g = std::max(p.g_o, p.g_t);
  const double k = std::max(p.kappa_o, p.kappa_t);
  return std::abs(p.g_o - p.g_t) <= 1e-12 * g && std::abs(p.kappa_o - p.kappa_t) <= 1e-12 * k &&
         p.kappa_m <= 1e-9 * k;
}

}  // namespace

void ConverterParams::validate() const {
  if (!(g_o >= 0.0) || !(g_t >= 0.0)) throw std::domain_error("ConverterParams: couplings must be >= 0");
  if (!(kappa_o > 0.0) || !(kappa_t > 0.0)) throw std::domain_error("ConverterParams: out-couplings must be positive");
  if (!(kappa_m >= 0.0)) throw std::domain_error("ConverterParams: phonon damping must be >= 0");
  if (!(n_bath_o >= 0.0) || !(n_bath_t >= 0.0) || !(n_bath_m >= 0.0)) {
    throw std::domain_error("ConverterParams: bath occupations must be >= 0");
  }
}

ConverterDynamics build_dynamics(const ConverterParams& params) {
  params.validate();
  Eigen::Matrix3d n = Eigen::Matrix3d::Zero();
  n.diagonal() << std::sqrt(params.kappa_o), std::sqrt(params.kappa_t), std::sqrt(params.kappa_m);

  // n^2 written with the rates directly so the decay diagonal is exact
  Eigen::Matrix3d half_decay = Eigen::Matrix3d::Zero();
  half_decay.diagonal() << 0.5 * params.kappa_o, 0.5 * params.kappa_t, 0.5 * params.kappa_m;

  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  g(0, 2) = g(2, 0) = params.g_o;
  g(1, 2) = g(2, 1) = params.g_t;

  ConverterDynamics dyn;
  dyn.drift.topLeftCorner<3, 3>() = -half_decay;
  dyn.drift.topRightCorner<3, 3>() = g;
  dyn.drift.bottomLeftCorner<3, 3>() = -g;
  dyn.drift.bottomRightCorner<3, 3>() = -half_decay;

  dyn.input_coupling.setZero();
  dyn.input_coupling.topLeftCorner<3, 3>() = n;
  dyn.input_coupling.bottomRightCorner<3, 3>() = n;
  return dyn;
}

std::complex<double> transmissivity_closed_form(const ConverterParams& params, double omega) {
  params.validate();
  const complexd two_i_w(0.0, 2.0 * omega);
  const complexd d = 4.0 * params.g_o * params.g_o + (params.kappa_o - two_i_w) * (params.kappa_m - two_i_w);
  const complexd denom = 4.0 * params.g_t * params.g_t * (params.kappa_o - two_i_w) + (params.kappa_t - two_i_w) * d;
  return -8.0 * params.g_o * params.g_t * std::sqrt(params.kappa_o * params.kappa_t) / denom;
}

double transmissivity_zero_frequency(const ConverterParams& params) {
  params.validate();
  const double num = 8.0 * params.g_o * params.g_t * std::sqrt(params.kappa_o * params.kappa_t);
  const double den = 4.0 * (params.g_o * params.g_o * params.kappa_t + params.g_t * params.g_t * params.kappa_o) +
                     params.kappa_o * params.kappa_m * params.kappa_t;
  return num / den;
}

FrequencyResponse frequency_response(const ConverterParams& params, double omega) {
  const ConverterDynamics dyn = build_dynamics(params);
  Matrix6cd a = dyn.drift.cast<complexd>();
  a.diagonal().array() += complexd(0.0, omega);

  Eigen::PartialPivLU<Matrix6cd> lu(a);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_max = pivots.maxCoeff();
  if (pivots.minCoeff() <= kPivotRatioFloor * pivot_max) {
    throw NumericError("frequency_response: response matrix singular at this frequency");
  }

  const Matrix6cd n = dyn.input_coupling.cast<complexd>();
  const Matrix6cd a_inv = lu.inverse();
  FrequencyResponse r;
  r.omega = omega;
  r.h = -n * a_inv * n - Matrix6cd::Identity();
  r.condition_estimate = a.cwiseAbs().rowwise().sum().maxCoeff() *
                         a_inv.cwiseAbs().rowwise().sum().maxCoeff();

  const complexd t12 = r.h(0, 1);  // q_o out <- q_t in
  const complexd t21 = r.h(1, 0);  // q_t out <- q_o in
  if (std::abs(t12 - t21) > 1e-10 * std::max(1.0, std::abs(t12))) {
    throw NumericError("frequency_response: reciprocity violated beyond tolerance");
  }
  r.transmissivity = t12;
  r.magnitude_sq = std::norm(t12);
  r.phase_rad = std::arg(-t12);  // the response is -|t(0)| at dc

  // Group delay from the phase of the ratio of two nearby responses; immune
  // to branch cuts of arg().
  const double scale = std::min({params.g_o > 0 ? params.g_o : params.kappa_o,
                                 params.g_t > 0 ? params.g_t : params.kappa_t, params.kappa_o,
                                 params.kappa_t});
  const double step = 1e-4 * scale;
  const auto t_at = [&](double w) {
    Matrix6cd m = dyn.drift.cast<complexd>();
    m.diagonal().array() += complexd(0.0, w);
    Eigen::PartialPivLU<Matrix6cd> lu2(m);
    const Matrix6cd h = -n * lu2.inverse() * n - Matrix6cd::Identity();
    return h(0, 1);
  };
  if (r.magnitude_sq > 0.0) {
    const complexd ratio = t_at(omega + step) / t_at(omega - step);
    r.group_delay_s = std::arg(ratio) / (2.0 * step);
  }
  return r;
}

ResponseShape magnitude_phase_delay(const ConverterParams& params, double omega) {
  params.validate();
  if (!symmetric_limit(params)) {
    throw std::invalid_argument(
        "magnitude_phase_delay: closed forms require g_o = g_t, kappa_o = kappa_t and negligible "
        "phonon damping; use frequency_response for general parameters");
  }
  const double g = params.g_o;
  const double k = params.kappa_o;
  const double g2 = g * g, k2 = k * k, w2 = omega * omega;

  ResponseShape shape;
  const double tail = 16.0 * g2 * (g2 - w2) + w2 * (k2 + 4.0 * w2);
  shape.magnitude_sq = k2 / (k2 + 4.0 * w2) * 16.0 * g2 * g2 / tail;
  shape.phase_rad = std::atan(omega * (8.0 * g2 + k2 - 4.0 * w2) / (4.0 * k * (g2 - w2)));
  shape.group_delay_s = 2.0 * k / (k2 + 4.0 * w2) + 2.0 * k * (2.0 * g2 + w2) / tail;
  shape.principal_branch = std::abs(omega) < g;
  return shape;
}

double useful_bandwidth(const ConverterParams& params, double deviation_tolerance) {
  if (!(deviation_tolerance > 0.0 && deviation_tolerance < 1.0)) {
    throw std::domain_error("useful_bandwidth: tolerance must lie in (0, 1)");
  }
  const double delay_dc = magnitude_phase_delay(params, 0.0).group_delay_s;
  const auto within = [&](double omega) {
    const ResponseShape s = magnitude_phase_delay(params, omega);
    return s.magnitude_sq >= 1.0 - deviation_tolerance &&
           std::abs(s.group_delay_s / delay_dc - 1.0) <= deviation_tolerance;
  };

  const double hi = 10.0 * std::max(params.kappa_o, params.g_o);
  if (!within(0.0)) return 0.0;
  double last_ok = 0.0, first_bad = hi;
  bool bracketed = false;
  const int scan = 512;
  for (int i = 1; i <= scan; ++i) {
    const double w = hi * std::pow(10.0, -6.0 * (1.0 - static_cast<double>(i) / scan));
    if (within(w)) {
      last_ok = w;
    } else {
      first_bad = w;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) return hi;
  for (int i = 0; i < kBisectIterations; ++i) {
    const double mid = 0.5 * (last_ok + first_bad);
    if (within(mid)) {
      last_ok = mid;
    } else {
      first_bad = mid;
    }
  }
  return 0.5 * (last_ok + first_bad);
}

SteadyStateOccupations steady_state_occupations(const ConverterParams& params) {
  const ConverterDynamics dyn = build_dynamics(params);
  const Matrix6d& m = dyn.drift;

  const Eigen::EigenSolver<Matrix6d> stability(m, /*computeEigenvectors=*/false);
  if (stability.eigenvalues().real().maxCoeff() >= 0.0) {
    throw NumericError("steady_state_occupations: drift matrix is not strictly stable");
  }

  Eigen::Matrix<double, 6, 1> bath;
  bath << 2.0 * params.n_bath_o + 1.0, 2.0 * params.n_bath_t + 1.0, 2.0 * params.n_bath_m + 1.0,
      2.0 * params.n_bath_o + 1.0, 2.0 * params.n_bath_t + 1.0, 2.0 * params.n_bath_m + 1.0;
  const Matrix6d d = dyn.input_coupling * bath.asDiagonal() * dyn.input_coupling.transpose();

  // vec(M V + V M^T) = (I (x) M + M (x) I) vec(V); 36 x 36 direct solve.
  Eigen::Matrix<double, 36, 36> k = Eigen::Matrix<double, 36, 36>::Zero();
  for (int col = 0; col < 6; ++col) {
    k.block<6, 6>(6 * col, 6 * col) += m;
    for (int row = 0; row < 6; ++row) {
      for (int j = 0; j < 6; ++j) k(6 * col + row, 6 * j + row) += m(col, j);
    }
  }
  Eigen::Matrix<double, 36, 1> rhs;
  for (int col = 0; col < 6; ++col)
    for (int row = 0; row < 6; ++row) rhs(6 * col + row) = -d(row, col);

  const Eigen::Matrix<double, 36, 1> vec_v = k.partialPivLu().solve(rhs);
  Matrix6d v;
  for (int col = 0; col < 6; ++col)
    for (int row = 0; row < 6; ++row) v(row, col) = vec_v(6 * col + row);
  v = 0.5 * (v + v.transpose()).eval();

  SteadyStateOccupations out;
  out.lyapunov_residual = (m * v + v * m.transpose() + d).cwiseAbs().maxCoeff();
  out.n_o = 0.25 * (v(0, 0) + v(3, 3) - 2.0);
  out.n_t = 0.25 * (v(1, 1) + v(4, 4) - 2.0);
  out.n_m = 0.25 * (v(2, 2) + v(5, 5) - 2.0);
  return out;
}

ConverterParams cryo_1k_preset() {
  ConverterParams p;
  p.g_o = 6e7;
  p.g_t = 1.2e8;
  p.kappa_o = 1.2e9;
  p.kappa_t = 8e8;
  p.kappa_m = 1e6;
  p.omega_m = 8.0079798e7;  // 1 K phonon bath below matches this resonance
  p.n_bath_o = 0.0;
  p.n_bath_t = 0.0;
  // Calibrated so the steady-state terahertz occupation is 1.72 photons.
  p.n_bath_m = 1634.3735420377238;
  return p;
}

KeyRateResult noisy_rate_rr(const ProtocolParams& protocol, double n_thz, NoiseInjection injection) {
  if (!(n_thz >= 0.0)) throw std::domain_error("noisy_rate_rr: occupation must be >= 0");
  const double v_c = 2.0 * n_thz;
  ProtocolParams p = protocol;
  switch (injection) {
    case NoiseInjection::kChannelInput:
      p.attack_noise += v_c;
      break;
    case NoiseInjection::kChannelOutput: {
      const double t = p.transmissivity;
      if (!(t < 1.0)) {
        throw std::domain_error("noisy_rate_rr: output-referenced injection needs T < 1");
      }
      p.attack_noise += v_c / (1.0 - t);
      break;
    }
  }
  return rate_rr_optimized(p);
}

}  // namespace thzqkd
