"""Channel covariance at the pilot positions, from the true or an assumed PDP."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ..errors import ParameterError
from ..waveforms.params import WaveformParams
from .model import ChannelSpec


class CovarianceKind(str, Enum):
    TRUE_PDP = "true_pdp"
    APPROXIMATED = "approximated"


@dataclass(frozen=True, slots=True)
class CovarianceMatrix:
    """Hermitian Toeplitz N_p x N_p pilot covariance; ``entries`` is read-only."""

    entries: npt.NDArray[np.complex128]
    kind: CovarianceKind

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def min_eigenvalue(self) -> float:
        return float(linalg.eigvalsh(self.entries).min())


def pilot_covariance(
    delays: npt.ArrayLike,
    powers: npt.ArrayLike,
    subcarriers: int,
    pilot_spacing: int,
    n_pilots: int,
    kind: CovarianceKind,
) -> CovarianceMatrix:
    """R(n, p) = sum_l P_l exp(-j 2 pi p_s (n - p) tau_l / K)."""
    lags = pilot_spacing * np.arange(n_pilots)[:, None]
    first_column = np.exp(
        -2j * np.pi * lags * np.asarray(delays, dtype=np.float64)[None, :] / subcarriers
    ) @ np.asarray(powers, dtype=np.float64)
    entries = linalg.toeplitz(first_column, first_column.conj())
    entries.setflags(write=False)
    return CovarianceMatrix(entries=entries, kind=kind)


def true_pilot_covariance(spec: ChannelSpec, params: WaveformParams) -> CovarianceMatrix:
    return pilot_covariance(
        spec.delays,
        spec.powers,
        params.subcarriers,
        params.pilot_spacing,
        params.n_pilots,
        CovarianceKind.TRUE_PDP,
    )


@lru_cache(maxsize=32)
def approx_pilot_covariance(
    cp_length: int,
    subcarriers: int,
    pilot_spacing: int,
    n_pilots: int,
) -> CovarianceMatrix:
    """Covariance of a channel with constant PDP 1/L over integer delays 0..L-1."""
    if cp_length < 1:
        raise ParameterError(f"approximated covariance needs a prefix of at least 1, got {cp_length}")
    delays = np.arange(cp_length, dtype=np.float64)
    powers = np.full(cp_length, 1.0 / cp_length)
    return pilot_covariance(
        delays, powers, subcarriers, pilot_spacing, n_pilots, CovarianceKind.APPROXIMATED
    )
