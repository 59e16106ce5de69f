#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thzqkd/converter.hpp"
#include "thzqkd/gaussian.hpp"
#include "thzqkd/keyrate.hpp"
#include "thzqkd/linkmodel.hpp"
#include "thzqkd/planck.hpp"

namespace py = pybind11;
using namespace thzqkd;

namespace {

std::vector<std::vector<double>> matrix_to_list(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out[r].resize(m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Terahertz CV-QKD rates, security thresholds and converter analysis";

  m.attr("PLANCK_CONSTANT") = kPlanckConstant;
  m.attr("BOLTZMANN_CONSTANT") = kBoltzmannConstant;
  m.attr("DEFAULT_TEMPERATURE_K") = kDefaultTemperatureK;

  // --- thermal preparation -------------------------------------------------
  m.def(
      "mean_thermal_photons",
      [](double frequency_hz, double temperature_k) {
        return mean_thermal_photons({frequency_hz, temperature_k});
      },
      py::arg("frequency_hz"), py::arg("temperature_k") = kDefaultTemperatureK);
  m.def(
      "preparation_variance",
      [](double frequency_hz, double temperature_k) {
        const PreparationVariance v = preparation_variance({frequency_hz, temperature_k});
        return py::make_tuple(v.v0, v.nbar);
      },
      py::arg("frequency_hz"), py::arg("temperature_k") = kDefaultTemperatureK,
      "Returns (v0, nbar) of the thermal source mode.");
  m.def("frequency_from_variance", &frequency_from_variance, py::arg("v0"),
        py::arg("temperature_k") = kDefaultTemperatureK);
  m.def("entropy_h", &entropy_h, py::arg("x"));
  m.def("lambda_mix", &lambda_mix, py::arg("x"), py::arg("y"), py::arg("transmissivity"));

  // --- protocol and rates --------------------------------------------------
  py::enum_<Reconciliation>(m, "Reconciliation")
      .value("DIRECT", Reconciliation::kDirect)
      .value("REVERSE", Reconciliation::kReverse);

  py::enum_<RateStatus>(m, "RateStatus")
      .value("FINITE", RateStatus::kFinite)
      .value("PLUS_INFINITE", RateStatus::kPlusInfinite)
      .value("MINUS_INFINITE", RateStatus::kMinusInfinite);

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](double v0, double va, double transmissivity, double attack_noise,
                       double eta, double trusted_noise) {
             ProtocolParams p;
             p.v0 = v0;
             p.va = va;
             p.transmissivity = transmissivity;
             p.attack_noise = attack_noise;
             p.eta = eta;
             p.trusted_noise = trusted_noise;
             p.validate();
             return p;
           }),
           py::arg("v0") = 1.0, py::arg("va") = 1e8, py::arg("transmissivity") = 0.5,
           py::arg("attack_noise") = 1.0, py::arg("eta") = 1.0, py::arg("trusted_noise") = 1.0)
      .def_readwrite("v0", &ProtocolParams::v0)
      .def_readwrite("va", &ProtocolParams::va)
      .def_readwrite("transmissivity", &ProtocolParams::transmissivity)
      .def_readwrite("attack_noise", &ProtocolParams::attack_noise)
      .def_readwrite("eta", &ProtocolParams::eta)
      .def_readwrite("trusted_noise", &ProtocolParams::trusted_noise);

  py::class_<SymplecticSpectrum>(m, "SymplecticSpectrum")
      .def_readonly("values", &SymplecticSpectrum::values);

  py::class_<KeyRateResult>(m, "KeyRateResult")
      .def_readonly("rate", &KeyRateResult::rate)
      .def_readonly("mutual_information", &KeyRateResult::mutual_information)
      .def_readonly("holevo", &KeyRateResult::holevo)
      .def_readonly("total_spectrum", &KeyRateResult::total_spectrum)
      .def_readonly("conditional_spectrum", &KeyRateResult::conditional_spectrum)
      .def_readonly("reconciliation", &KeyRateResult::reconciliation)
      .def_readonly("trusted_noise_choice", &KeyRateResult::trusted_noise_choice)
      .def_readonly("status", &KeyRateResult::status)
      .def("finite", &KeyRateResult::finite);

  m.def("mutual_information", &mutual_information, py::arg("params"), py::arg("asymptotic") = false);
  m.def("rate_dr", &rate_dr, py::arg("params"));
  m.def("rate_rr", &rate_rr, py::arg("params"));
  m.def("rate_rr_optimized", &rate_rr_optimized, py::arg("params"));
  m.def("rate_finite_modulation", &rate_finite_modulation, py::arg("params"),
        py::arg("reconciliation"));
  m.def("plob_bound", &plob_bound, py::arg("transmissivity"), py::arg("nbar"));

  // --- covariance matrices -------------------------------------------------
  py::class_<CovarianceMatrix>(m, "CovarianceMatrix")
      .def_property_readonly("modes", &CovarianceMatrix::modes)
      .def_property_readonly("entries",
                             [](const CovarianceMatrix& cm) { return matrix_to_list(cm.matrix()); })
      .def("is_physical", &CovarianceMatrix::is_physical);

  py::enum_<Quadrature>(m, "Quadrature").value("Q", Quadrature::kQ).value("P", Quadrature::kP);

  m.def("tmsv_cm", &tmsv_cm, py::arg("w"));
  m.def("eve_output_cm", &eve_output_cm, py::arg("params"), py::arg("v_alice"));
  m.def("eve_bob_joint_cm", &eve_bob_joint_cm, py::arg("params"), py::arg("v_alice"));
  m.def("homodyne_condition", &homodyne_condition, py::arg("joint"), py::arg("measured_mode"),
        py::arg("quadrature") = Quadrature::kQ);
  m.def("symplectic_spectrum_two_mode",
        [](const CovarianceMatrix& cm) { return symplectic_spectrum_two_mode(cm).values; });
  m.def("symplectic_spectrum_bruteforce",
        [](const CovarianceMatrix& cm) { return symplectic_spectrum_bruteforce(cm).values; });

  // --- link model ------------------------------------------------------------
  py::enum_<TrustedNoisePolicy>(m, "TrustedNoisePolicy")
      .value("UNIT", TrustedNoisePolicy::kUnit)
      .value("MATCH_V0", TrustedNoisePolicy::kMatchV0)
      .value("OPTIMIZED", TrustedNoisePolicy::kOptimized);

  py::class_<AttenuationTable>(m, "AttenuationTable")
      .def_static("clear_atmosphere", [] { return AttenuationTable::clear_atmosphere(); })
      .def_static("from_csv", &AttenuationTable::from_csv, py::arg("path"))
      .def("delta_db_per_km", &AttenuationTable::delta_db_per_km, py::arg("frequency_hz"));

  m.def("transmissivity_from_distance", &transmissivity_from_distance, py::arg("distance_m"),
        py::arg("delta_db_per_km"));
  m.def("distance_from_transmissivity", &distance_from_transmissivity, py::arg("transmissivity"),
        py::arg("delta_db_per_km"));
  m.def(
      "security_threshold_frequency",
      [](double transmissivity, double eta, Reconciliation mode, TrustedNoisePolicy s_policy,
         double temperature_k) -> py::object {
        const ThresholdResult r =
            security_threshold_frequency(transmissivity, eta, mode, s_policy, temperature_k);
        if (!r.frequency_hz) return py::none();
        return py::float_(*r.frequency_hz);
      },
      py::arg("transmissivity"), py::arg("eta"), py::arg("mode"), py::arg("s_policy"),
      py::arg("temperature_k") = kDefaultThresholdTemperatureK);
  m.def("plob_threshold_frequency", &plob_threshold_frequency, py::arg("transmissivity"),
        py::arg("temperature_k") = kDefaultThresholdTemperatureK);
  m.def(
      "max_distance",
      [](double frequency_hz, double eta, Reconciliation mode, TrustedNoisePolicy s_policy,
         double extra_noise, double temperature_k) {
        const MaxDistanceResult r = max_distance(frequency_hz, eta, mode, s_policy, extra_noise,
                                                 AttenuationTable::clear_atmosphere(), temperature_k);
        return py::make_tuple(r.distance_m, r.secure_at_zero);
      },
      py::arg("frequency_hz"), py::arg("eta"), py::arg("mode"), py::arg("s_policy"),
      py::arg("extra_noise") = 0.0, py::arg("temperature_k") = kDefaultThresholdTemperatureK,
      "Returns (distance_m, secure_at_zero) under the built-in attenuation table.");

  // --- converter -------------------------------------------------------------
  py::class_<ConverterParams>(m, "ConverterParams")
      .def(py::init<>())
      .def_readwrite("g_o", &ConverterParams::g_o)
      .def_readwrite("g_t", &ConverterParams::g_t)
      .def_readwrite("kappa_o", &ConverterParams::kappa_o)
      .def_readwrite("kappa_t", &ConverterParams::kappa_t)
      .def_readwrite("kappa_m", &ConverterParams::kappa_m)
      .def_readwrite("omega_m", &ConverterParams::omega_m)
      .def_readwrite("n_bath_o", &ConverterParams::n_bath_o)
      .def_readwrite("n_bath_t", &ConverterParams::n_bath_t)
      .def_readwrite("n_bath_m", &ConverterParams::n_bath_m);

  py::class_<FrequencyResponse>(m, "FrequencyResponse")
      .def_readonly("omega", &FrequencyResponse::omega)
      .def_readonly("transmissivity", &FrequencyResponse::transmissivity)
      .def_readonly("magnitude_sq", &FrequencyResponse::magnitude_sq)
      .def_readonly("phase_rad", &FrequencyResponse::phase_rad)
      .def_readonly("group_delay_s", &FrequencyResponse::group_delay_s)
      .def_readonly("condition_estimate", &FrequencyResponse::condition_estimate);

  py::class_<ResponseShape>(m, "ResponseShape")
      .def_readonly("magnitude_sq", &ResponseShape::magnitude_sq)
      .def_readonly("phase_rad", &ResponseShape::phase_rad)
      .def_readonly("group_delay_s", &ResponseShape::group_delay_s)
      .def_readonly("principal_branch", &ResponseShape::principal_branch);

  py::class_<SteadyStateOccupations>(m, "SteadyStateOccupations")
      .def_readonly("n_o", &SteadyStateOccupations::n_o)
      .def_readonly("n_t", &SteadyStateOccupations::n_t)
      .def_readonly("n_m", &SteadyStateOccupations::n_m)
      .def_readonly("lyapunov_residual", &SteadyStateOccupations::lyapunov_residual);

  py::enum_<NoiseInjection>(m, "NoiseInjection")
      .value("CHANNEL_INPUT", NoiseInjection::kChannelInput)
      .value("CHANNEL_OUTPUT", NoiseInjection::kChannelOutput);

  m.def("frequency_response", &frequency_response, py::arg("params"), py::arg("omega"));
  m.def("transmissivity_closed_form", &transmissivity_closed_form, py::arg("params"),
        py::arg("omega"));
  m.def("transmissivity_zero_frequency", &transmissivity_zero_frequency, py::arg("params"));
  m.def("magnitude_phase_delay", &magnitude_phase_delay, py::arg("params"), py::arg("omega"));
  m.def("useful_bandwidth", &useful_bandwidth, py::arg("params"), py::arg("deviation_tolerance"));
  m.def("steady_state_occupations", &steady_state_occupations, py::arg("params"));
  m.def("cryo_1k_preset", &cryo_1k_preset);
  m.def("noisy_rate_rr", &noisy_rate_rr, py::arg("protocol"), py::arg("n_thz"),
        py::arg("injection") = NoiseInjection::kChannelInput);
}
