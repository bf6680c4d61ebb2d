"""Zero-forcing equalization with a deep-fade floor."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import ShapeMismatchError

DEEP_FADE_FLOOR = 1e-8


@dataclass(frozen=True, slots=True)
class Equalization:
    spectrum: npt.NDArray[np.complex128]
    flagged_bins: npt.NDArray[np.int64]
    warnings: tuple[str, ...] = ()


def zf_equalize(y_freq: npt.ArrayLike, h_full: npt.ArrayLike) -> Equalization:
    """Per-bin ``Y / H_hat``; bins with ``|H_hat| < 1e-8`` are pushed out to the floor first."""
    spectrum = np.asarray(y_freq, dtype=np.complex128)
    response = np.asarray(h_full, dtype=np.complex128)
    if spectrum.shape[-1:] != response.shape:
        raise ShapeMismatchError(
            f"spectrum of shape {spectrum.shape} does not match a channel estimate of "
            f"shape {response.shape}"
        )
    magnitude = np.abs(response)
    deep = magnitude < DEEP_FADE_FLOOR
    if not np.any(deep):
        return Equalization(spectrum=spectrum / response, flagged_bins=np.zeros(0, dtype=np.int64))

    phase = np.where(magnitude > 0, response / np.where(magnitude > 0, magnitude, 1.0), 1.0)
    regularized = np.where(deep, response + DEEP_FADE_FLOOR * phase, response)
    flagged = np.flatnonzero(deep).astype(np.int64)
    return Equalization(
        spectrum=spectrum / regularized,
        flagged_bins=flagged,
        warnings=(f"deep fade regularized on {flagged.size} bin(s)",),
    )
