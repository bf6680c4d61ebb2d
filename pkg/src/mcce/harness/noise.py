"""Eb/N0 to noise-variance bookkeeping."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..waveforms.params import WaveformParams

BITS_PER_SYMBOL = 2
SYMBOL_ENERGY = 1.0


def link_overhead(params: WaveformParams) -> float:
    """Energy spent per data symbol relative to a bare symbol: prefix times pilot overhead.

    OFDM pays one prefix per symbol and GFDM one per block, so OFDM's factor is larger.
    """
    if params.n_pilots >= params.subcarriers:
        raise ParameterError("every subcarrier is a pilot; no data energy to account for")
    prefix = (params.block_length + params.cp_samples) / params.block_length
    pilots = params.subcarriers / (params.subcarriers - params.n_pilots)
    return prefix * pilots


def ebn0_to_noise_variance(ebn0_db: float, *, overhead: float = 1.0) -> float:
    """``Es * overhead / (bits_per_symbol * Eb/N0)`` with Es = 1 and QPSK."""
    if overhead <= 0:
        raise ParameterError(f"overhead must be positive, got {overhead}")
    ebn0_linear = 10.0 ** (ebn0_db / 10.0)
    return float(SYMBOL_ENERGY * overhead / (BITS_PER_SYMBOL * ebn0_linear))


def noise_variances(ebn0_db: tuple[float, ...] | list[float], params: WaveformParams) -> np.ndarray:
    overhead = link_overhead(params)
    return np.array([ebn0_to_noise_variance(value, overhead=overhead) for value in ebn0_db])
