"""Uplink cell-free massive MIMO with an amplify-and-forward wireless fronthaul.

Numerical library for simulating distributed multi-antenna access points that
receive uplink signals through impaired hardware, precode them, and forward
them in analog form over an impaired wireless fronthaul to a central
processing unit, which applies distortion-aware (or unaware) linear combining
per user. Includes correlated-fading channel models, analytic SINR/SE
evaluation, a symbol-level validation oracle, and a reproducible Monte-Carlo
campaign runner with CSV export.
"""

from .channels import (
    ChannelRealization,
    LargeScaleModel,
    NetworkGeometry,
    array_response,
    build_access_correlations,
    draw_channel_realization,
    fronthaul_correlation_factors,
    generate_geometry,
    large_scale_coefficients,
    local_scattering_correlation,
    sample_access_channels,
    sample_fronthaul_channels,
)
from .combining import (
    CombinerReport,
    centralized_benchmark_sinr,
    distortion_unaware_combiner,
    evaluate_combiner,
    max_sinr,
    optimal_combiner,
    sinr_of_combiner,
    sinr_term_breakdown,
    spectral_efficiency,
    stack_access_channels,
)
from .experiment import (
    CdfSeries,
    ExperimentConfig,
    ExperimentResult,
    SeSample,
    empirical_cdf,
    default_cdf_series,
    export_results,
    read_samples,
    run_experiment,
    scenario_presets,
)
from .impairments import (
    DistortionCovariances,
    EffectiveChannelSet,
    HardwareProfile,
    SymbolSimResult,
    access_distortion_cov,
    cpu_covariance,
    cpu_covariances,
    effective_channels,
    fronthaul_distortion_cov,
    fronthaul_radiated_power,
    simulate_symbol_transmission,
)
from .linalg import NumericalError
from .precoding import (
    PrecoderSet,
    bi_svd_precoder,
    build_precoders,
    identity_precoder,
    power_scaling,
    transmit_power,
)

__version__ = "0.1.0"
