"""Cyclic prefix handling and pilot extraction shared by both systems."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError, ParameterError, SubcarrierIndexError
from .params import WaveformParams


def add_cp(x: npt.ArrayLike, cp_length: int) -> npt.NDArray[np.complex128]:
    """Prepend the last ``cp_length`` samples along the last axis."""
    signal = np.asarray(x, dtype=np.complex128)
    _check_cp(signal, cp_length)
    if cp_length == 0:
        return signal.copy()
    return np.concatenate((signal[..., -cp_length:], signal), axis=-1)


def remove_cp(x_cp: npt.ArrayLike, cp_length: int) -> npt.NDArray[np.complex128]:
    signal = np.asarray(x_cp, dtype=np.complex128)
    _check_cp(signal, cp_length)
    return signal[..., cp_length:].copy()


def _check_cp(signal: npt.NDArray[np.complex128], cp_length: int) -> None:
    if cp_length < 0 or cp_length > signal.shape[-1]:
        raise ParameterError(
            f"cyclic prefix length {cp_length} outside [0, {signal.shape[-1]}]"
        )


def extract_pilots(
    y_freq: npt.ArrayLike,
    params: WaveformParams,
    *,
    pilot_gain: complex = 1.0,
) -> npt.NDArray[np.complex128]:
    """Received values at the pilot bins, descaled by the transmit pilot gain.

    ``pilot_gain`` is the product of the pilot scaling and the prototype gain at the pilot
    bin; it is 1 for OFDM. Leading axes (OFDM symbols) are preserved.
    """
    spectrum = np.asarray(y_freq, dtype=np.complex128)
    if spectrum.shape[-1] != params.grid_size:
        raise DimensionError(
            f"spectrum length {spectrum.shape[-1]} does not match grid size {params.grid_size}"
        )
    bins = params.pilot_bins
    if bins.size and (bins.min() < 0 or bins.max() >= params.grid_size):
        raise SubcarrierIndexError(f"pilot bins fall outside a grid of {params.grid_size}")
    return spectrum[..., bins] / pilot_gain
