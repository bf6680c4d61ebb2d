"""Pilot-aided channel estimators and basis expansion models."""

from .basis import BasisGrid, BasisKind, BasisMatrix, ce_basis, lp_basis
from .bem import (
    AlmmseBemEstimator,
    CoefficientCovariance,
    LmmseBemEstimator,
    LsBemEstimator,
    almmse_bem_estimate,
    coefficient_covariance,
    lmmse_bem_estimate,
    lmmse_bem_primal,
    ls_bem_estimate,
)
from .classical import LmmseEstimator, LsEstimator, lmmse_estimate, ls_estimate
from .interpolate import delay_domain_interpolation, full_grid_basis, interpolate_full_grid
from .observation import ChannelEstimator, EstimateResult, EstimatorKind, PilotObservation

__all__ = [
    "AlmmseBemEstimator",
    "BasisGrid",
    "BasisKind",
    "BasisMatrix",
    "ChannelEstimator",
    "CoefficientCovariance",
    "EstimateResult",
    "EstimatorKind",
    "LmmseBemEstimator",
    "LmmseEstimator",
    "LsBemEstimator",
    "LsEstimator",
    "PilotObservation",
    "almmse_bem_estimate",
    "ce_basis",
    "coefficient_covariance",
    "delay_domain_interpolation",
    "full_grid_basis",
    "interpolate_full_grid",
    "lmmse_bem_estimate",
    "lmmse_bem_primal",
    "lp_basis",
    "ls_bem_estimate",
    "ls_estimate",
]
