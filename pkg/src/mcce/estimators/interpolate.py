"""Interpolation of pilot estimates onto the full frequency grid."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import numpy.typing as npt

from ..errors import ContractViolationError, DimensionError
from ..waveforms.params import WaveformParams
from .basis import BasisGrid, BasisKind, BasisMatrix, ce_basis, lp_basis
from .observation import EstimateResult, EstimatorKind


@lru_cache(maxsize=32)
def full_grid_basis(kind: BasisKind, n_coefficients: int, params: WaveformParams) -> BasisMatrix:
    """Basis evaluated on every bin of ``params.grid_size``; its pilot rows match the pilot basis."""
    if kind is BasisKind.CE:
        return ce_basis(
            params.grid_size,
            n_coefficients,
            params.pilot_spacing,
            params.subcarriers,
            BasisGrid.FULL,
        )
    return lp_basis(params.grid_size, n_coefficients, BasisGrid.FULL, n_pilots=params.n_pilots)


def interpolate_full_grid(result: EstimateResult, params: WaveformParams) -> npt.NDArray[np.complex128]:
    if result.h_full is not None:
        return result.h_full
    if result.kind is EstimatorKind.PERFECT:
        raise ContractViolationError("perfect-CSI results must carry the full-grid response")

    if result.kind.is_bem:
        if result.a_hat is None or result.basis is None:
            raise ContractViolationError(f"{result.kind.label} result has no BEM coefficients")
        basis = full_grid_basis(result.basis.kind, result.basis.n_coefficients, params)
        return basis.evaluate(result.a_hat)

    return delay_domain_interpolation(result.h_pilot, params)


def delay_domain_interpolation(
    h_pilot: npt.ArrayLike,
    params: WaveformParams,
) -> npt.NDArray[np.complex128]:
    """Pilot estimates -> ``max(L_cp, 1)`` delay taps -> zero-padded DFT on the full grid.

    Exact for integer delays shorter than the prefix.
    """
    estimates = np.asarray(h_pilot, dtype=np.complex128)
    if estimates.shape != (params.n_pilots,):
        raise DimensionError(f"expected {params.n_pilots} pilot estimates, got {estimates.shape}")
    taps = np.fft.ifft(estimates)
    n_taps = min(max(params.cp_length, 1), params.n_pilots)
    padded = np.zeros(params.grid_size, dtype=np.complex128)
    padded[:n_taps] = taps[:n_taps]
    return np.fft.fft(padded)
