"""Symbol decisions: per-bin slicing for OFDM, iterative interference cancellation for GFDM.

Each IC sweep rebuilds the interference of subcarriers k-1 and k+1 from the decisions of
the previous sweep with the modulator's own per-subcarrier path, subtracts it from the
uncancelled windows and detects again. All subcarriers of a sweep read the same frozen
snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core import qpsk_slice
from ..errors import DimensionError, ParameterError
from ..waveforms.gfdm import GfdmModem


@dataclass(frozen=True, slots=True)
class IcState:
    y0: npt.NDArray[np.complex128]
    d_hat: npt.NDArray[np.complex128]
    j: int
    J: int


def ic_receive(
    y_freq: npt.ArrayLike,
    modem: GfdmModem,
    iterations: int,
    *,
    pilots: npt.ArrayLike | None = None,
) -> IcState:
    """Detect a K x M symbol grid from an equalized N-point spectrum.

    ``pilots`` are written back at their positions after every decision so that pilot
    subcarriers reconstruct exactly; without them the pilot position is sliced like data.
    """
    if iterations < 0:
        raise ParameterError(f"IC iterations must be non-negative, got {iterations}")
    params = modem.params
    known = None
    if pilots is not None:
        known = np.asarray(pilots, dtype=np.complex128).ravel()
        if known.size != params.n_pilots:
            raise DimensionError(f"expected {params.n_pilots} pilots, got {known.size}")

    y0 = modem.windows(y_freq)
    y0.setflags(write=False)
    decisions = _decide(modem, y0, known)

    for _ in range(iterations):
        previous = decisions.copy()
        previous.setflags(write=False)
        interference = modem.adjacent_interference(modem.frequency_vectors(previous))
        decisions = _decide(modem, y0 - interference, known)

    return IcState(y0=y0, d_hat=decisions, j=iterations, J=iterations)


def ofdm_detect(y_freq: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """OFDM subcarriers are orthogonal, so equalized bins are sliced directly."""
    return qpsk_slice(y_freq)


def _decide(
    modem: GfdmModem,
    windows: npt.NDArray[np.complex128],
    known: npt.NDArray[np.complex128] | None,
) -> npt.NDArray[np.complex128]:
    decisions = qpsk_slice(modem.detect(modem.matched_filter(windows)))
    if known is not None:
        decisions[modem.params.pilot_subcarriers, 0] = known
    return decisions
