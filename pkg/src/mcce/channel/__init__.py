"""Fading channel generation, application and covariance synthesis."""

from .covariance import (
    CovarianceKind,
    CovarianceMatrix,
    approx_pilot_covariance,
    pilot_covariance,
    true_pilot_covariance,
)
from .model import (
    ChannelRealization,
    ChannelSpec,
    FadingModel,
    add_awgn,
    apply_channel,
    complex_gaussian,
    draw_channel,
    frequency_response,
)

__all__ = [
    "ChannelRealization",
    "ChannelSpec",
    "CovarianceKind",
    "CovarianceMatrix",
    "FadingModel",
    "add_awgn",
    "apply_channel",
    "approx_pilot_covariance",
    "complex_gaussian",
    "draw_channel",
    "frequency_response",
    "pilot_covariance",
    "true_pilot_covariance",
]
