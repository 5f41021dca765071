"""Fluid antenna system SER scaling-law toolkit.

Monte Carlo link-level simulation of best-port selection over
spatially correlated Rayleigh fading, with closed-form asymptotic SER,
diversity-gain, and coding-gain predictions to validate against.
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticPrediction,
    asymptotic_pdf,
    asymptotic_ser,
    coding_gain,
    diversity_gain,
    fit_slope,
    predict,
)
from .modulation import Constellation, ModulationSpec, build_constellation, conditional_ser, detect, params_of
from .monte_carlo import SerEstimate, SimulationConfig, derive_stream, estimate_ser
from .spatial_channel import (
    ApertureConfig,
    ChannelDraw,
    CorrelationModel,
    build_jakes_model,
    effective_rank,
    instantaneous_snr,
    port_spacing,
    sample_channel,
)
from .special_functions import bessel_j0, double_factorial_odd, gaussian_q

__all__ = [
    "__version__",
    "ApertureConfig",
    "AsymptoticPrediction",
    "ChannelDraw",
    "Constellation",
    "CorrelationModel",
    "ModulationSpec",
    "SerEstimate",
    "SimulationConfig",
    "asymptotic_pdf",
    "asymptotic_ser",
    "bessel_j0",
    "build_constellation",
    "build_jakes_model",
    "coding_gain",
    "conditional_ser",
    "derive_stream",
    "detect",
    "diversity_gain",
    "double_factorial_odd",
    "effective_rank",
    "estimate_ser",
    "fit_slope",
    "gaussian_q",
    "instantaneous_snr",
    "params_of",
    "port_spacing",
    "predict",
    "sample_channel",
]
