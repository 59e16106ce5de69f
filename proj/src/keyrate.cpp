#include "thzqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thzqkd/planck.hpp"

namespace thzqkd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lam(const ProtocolParams& p, double x, double y) {
  return lambda_mix(x, y, p.transmissivity);
}

// Variance of Bob's outcome given Alice's encoding:
// eta*T*v0 + eta*(1-T)*W + (1-eta)*S.
double bob_conditional_variance(const ProtocolParams& p) {
  return p.eta * p.transmissivity * p.v0 + p.eta * (1.0 - p.transmissivity) * p.attack_noise +
         (1.0 - p.eta) * p.trusted_noise;
}

double bob_total_variance(const ProtocolParams& p) {
  return p.eta * p.transmissivity * p.total_alice_variance() +
         p.eta * (1.0 - p.transmissivity) * p.attack_noise + (1.0 - p.eta) * p.trusted_noise;
}

// Large-modulation limit of the smaller conditional eigenvalue of Eve's
// state given Bob's outcome. Derived from the exact conditional covariance
// matrix; checked against rate_finite_modulation in the tests.
double conditional_eigenvalue_rr(const ProtocolParams& p) {
  const double t = p.transmissivity;
  const double w = p.attack_noise;
  const double s = p.trusted_noise;
  const double trusted_leak = s * (1.0 - t) * (1.0 - p.eta);
  return std::sqrt(w * (w * trusted_leak + p.eta) / (w * p.eta + trusted_leak));
}

// Large-modulation limit of the smaller conditional eigenvalue given
// Alice's encoding.
double conditional_eigenvalue_dr(const ProtocolParams& p) {
  const double w = p.attack_noise;
  return std::sqrt(w * lam(p, 1.0, w * p.v0) / lam(p, w, p.v0));
}

KeyRateResult tagged_limit(Reconciliation rec, RateStatus status, double s_choice) {
  KeyRateResult r;
  r.reconciliation = rec;
  r.trusted_noise_choice = s_choice;
  r.status = status;
  r.rate = (status == RateStatus::kPlusInfinite) ? kInf : -kInf;
  r.mutual_information = std::numeric_limits<double>::quiet_NaN();
  r.holevo = std::numeric_limits<double>::quiet_NaN();
  return r;
}

SymplecticSpectrum sorted_pair(double a, double b) {
  if (a < b) std::swap(a, b);
  return {{a, b}};
}

}  // namespace

double mutual_information(const ProtocolParams& params, bool asymptotic) {
  params.validate();
  const double denom = bob_conditional_variance(params);
  const double numer = asymptotic ? params.eta * params.transmissivity * params.va
                                  : bob_total_variance(params);
  return 0.5 * std::log2(numer / denom);
}

KeyRateResult rate_dr(const ProtocolParams& params) {
  params.validate();
  const double t = params.transmissivity;
  if (t >= 1.0) return tagged_limit(Reconciliation::kDirect, RateStatus::kPlusInfinite, params.trusted_noise);
  if (t <= 0.0) return tagged_limit(Reconciliation::kDirect, RateStatus::kMinusInfinite, params.trusted_noise);

  const double w = params.attack_noise;
  KeyRateResult r;
  r.reconciliation = Reconciliation::kDirect;
  r.trusted_noise_choice = params.trusted_noise;

  // The rate itself is modulation-independent; the closed form below is the
  // cancelled I - chi. The diagnostics keep their va-dependent values.
  const double nu1 = conditional_eigenvalue_dr(params);
  const double detector = params.eta * lam(params, params.v0, w) + (1.0 - params.eta) * params.trusted_noise;
  r.rate = entropy_h(nu1) - entropy_h(w) +
           0.5 * std::log2(t * params.eta * lam(params, w, params.v0) / ((1.0 - t) * detector));
  r.mutual_information = mutual_information(params, /*asymptotic=*/true);
  r.holevo = entropy_h(w) - entropy_h(nu1) +
             0.5 * std::log2((1.0 - t) * params.va / lam(params, w, params.v0));

  r.total_spectrum = sorted_pair(w, (1.0 - t) * params.va);
  r.conditional_spectrum =
      sorted_pair(nu1, std::sqrt((1.0 - t) * lam(params, w, params.v0) * params.va));
  return r;
}

KeyRateResult rate_rr(const ProtocolParams& params) {
  params.validate();
  const double t = params.transmissivity;
  if (t >= 1.0) return tagged_limit(Reconciliation::kReverse, RateStatus::kPlusInfinite, params.trusted_noise);
  if (t <= 0.0) return tagged_limit(Reconciliation::kReverse, RateStatus::kMinusInfinite, params.trusted_noise);

  const double w = params.attack_noise;
  const double s = params.trusted_noise;
  const double eta = params.eta;
  KeyRateResult r;
  r.reconciliation = Reconciliation::kReverse;
  r.trusted_noise_choice = s;

  const double nu3 = conditional_eigenvalue_rr(params);
  const double bob_side = s * (1.0 - eta) * (1.0 - t) + w * eta;
  const double detector = eta * lam(params, params.v0, w) + (1.0 - eta) * s;
  r.rate = entropy_h(nu3) - entropy_h(w) + 0.5 * std::log2(bob_side / ((1.0 - t) * detector));
  r.mutual_information = mutual_information(params, /*asymptotic=*/true);
  r.holevo =
      entropy_h(w) - entropy_h(nu3) + 0.5 * std::log2((1.0 - t) * t * eta * params.va / bob_side);

  r.total_spectrum = sorted_pair(w, (1.0 - t) * params.va);
  r.conditional_spectrum =
      sorted_pair(nu3, std::sqrt((1.0 - t) * bob_side * params.va / (t * eta)));
  return r;
}

KeyRateResult rate_rr_optimized(const ProtocolParams& params) {
  ProtocolParams unit = params;
  unit.trusted_noise = 1.0;
  ProtocolParams matched = params;
  matched.trusted_noise = params.v0;

  KeyRateResult a = rate_rr(unit);
  KeyRateResult b = rate_rr(matched);
  return (b.rate > a.rate) ? b : a;
}

KeyRateResult rate_finite_modulation(const ProtocolParams& params, Reconciliation reconciliation) {
  params.validate();
  const double v_alice = params.total_alice_variance();

  const CovarianceMatrix total = eve_output_cm(params, v_alice);
  const SymplecticSpectrum total_spec = symplectic_spectrum_two_mode(total);

  CovarianceMatrix conditional = [&] {
    if (reconciliation == Reconciliation::kDirect) {
      return eve_conditional_on_alice_cm(params, v_alice);
    }
    const double t = params.transmissivity;
    if (t > 0.0 && t < 1.0) return eve_conditional_on_bob_cm(params, v_alice);
    const CovarianceMatrix joint = eve_bob_joint_cm(params, v_alice);
    return homodyne_condition(joint, /*measured_mode=*/2, Quadrature::kQ);
  }();
  const SymplecticSpectrum cond_spec = symplectic_spectrum_two_mode(conditional);

  double h_total = 0.0, h_cond = 0.0;
  for (double v : total_spec.values) h_total += entropy_h(v);
  for (double v : cond_spec.values) h_cond += entropy_h(v);

  KeyRateResult r;
  r.reconciliation = reconciliation;
  r.trusted_noise_choice = params.trusted_noise;
  r.mutual_information = mutual_information(params, /*asymptotic=*/false);
  r.holevo = h_total - h_cond;
  r.rate = r.mutual_information - r.holevo;
  r.total_spectrum = total_spec;
  r.conditional_spectrum = cond_spec;
  return r;
}

double plob_bound(double transmissivity, double nbar) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::domain_error("plob_bound: transmissivity outside [0, 1]");
  }
  if (!(nbar >= 0.0)) throw std::domain_error("plob_bound: nbar must be >= 0");
  if (transmissivity >= 1.0) return kInf;
  if (transmissivity <= 0.0) return 0.0;
  if (nbar >= transmissivity / (1.0 - transmissivity)) return 0.0;
  return -std::log2(1.0 - transmissivity) - nbar * std::log2(transmissivity) -
         entropy_h(2.0 * nbar + 1.0);
}

}  // namespace thzqkd
