"""Terahertz CV-QKD rates, security thresholds and converter analysis."""

from thzqkd._core import (  # noqa: F401
    BOLTZMANN_CONSTANT,
    DEFAULT_TEMPERATURE_K,
    PLANCK_CONSTANT,
    AttenuationTable,
    ConverterParams,
    CovarianceMatrix,
    FrequencyResponse,
    KeyRateResult,
    NoiseInjection,
    ProtocolParams,
    Quadrature,
    RateStatus,
    Reconciliation,
    ResponseShape,
    SteadyStateOccupations,
    SymplecticSpectrum,
    TrustedNoisePolicy,
    cryo_1k_preset,
    distance_from_transmissivity,
    entropy_h,
    eve_bob_joint_cm,
    eve_output_cm,
    frequency_from_variance,
    frequency_response,
    homodyne_condition,
    lambda_mix,
    magnitude_phase_delay,
    max_distance,
    mean_thermal_photons,
    mutual_information,
    noisy_rate_rr,
    plob_bound,
    plob_threshold_frequency,
    preparation_variance,
    rate_dr,
    rate_finite_modulation,
    rate_rr,
    rate_rr_optimized,
    security_threshold_frequency,
    steady_state_occupations,
    symplectic_spectrum_bruteforce,
    symplectic_spectrum_two_mode,
    tmsv_cm,
    transmissivity_closed_form,
    transmissivity_from_distance,
    transmissivity_zero_frequency,
    useful_bandwidth,
)

__version__ = "0.1.0"
