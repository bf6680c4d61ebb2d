"""OFDM frames of M symbols, each with its own cyclic prefix and pilots."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError
from .framing import add_cp, remove_cp
from .params import WaveformParams


def ofdm_modulate(d: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Unitary inverse DFT of one OFDM symbol (or of each row)."""
    symbols = np.asarray(d, dtype=np.complex128)
    if symbols.size == 0:
        raise DimensionError("OFDM symbol must not be empty")
    return np.fft.ifft(symbols, axis=-1, norm="ortho")


def ofdm_demodulate(y: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    return np.fft.fft(np.asarray(y, dtype=np.complex128), axis=-1, norm="ortho")


@dataclass(frozen=True, slots=True)
class OfdmFrame:
    """``symbols`` is M x K (one row per OFDM symbol) with pilots already in place."""

    symbols: npt.NDArray[np.complex128]
    pilots: npt.NDArray[np.complex128]
    data_mask: npt.NDArray[np.bool_]
    time_signal: npt.NDArray[np.complex128]
    with_cp: npt.NDArray[np.complex128]


class OfdmModem:
    """Frame builder and receiver front end for the OFDM system."""

    pilot_gain = 1.0

    def __init__(self, params: WaveformParams) -> None:
        self.params = params
        self.data_mask = np.ones((params.subsymbols, params.subcarriers), dtype=bool)
        self.data_mask[:, params.pilot_bins] = False

    @property
    def data_symbols_per_frame(self) -> int:
        return int(self.data_mask.sum())

    def frame(self, data: npt.ArrayLike, pilots: npt.ArrayLike) -> OfdmFrame:
        """Place data symbols (row-major over data bins) and M x N_p pilots into a frame."""
        params = self.params
        values = np.asarray(data, dtype=np.complex128).ravel()
        pilot_grid = np.asarray(pilots, dtype=np.complex128).reshape(
            params.subsymbols, params.n_pilots
        )
        if values.size != self.data_symbols_per_frame:
            raise DimensionError(
                f"expected {self.data_symbols_per_frame} data symbols, got {values.size}"
            )
        symbols = np.zeros((params.subsymbols, params.subcarriers), dtype=np.complex128)
        symbols[self.data_mask] = values
        symbols[:, params.pilot_bins] = pilot_grid
        time_signal = ofdm_modulate(symbols)
        return OfdmFrame(
            symbols=symbols,
            pilots=pilot_grid,
            data_mask=self.data_mask,
            time_signal=time_signal,
            with_cp=add_cp(time_signal, params.cp_length),
        )

    def receive(self, y_cp: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Strip each prefix and return the M x K received spectrum."""
        blocks = np.asarray(y_cp, dtype=np.complex128).reshape(
            self.params.subsymbols, self.params.subcarriers + self.params.cp_length
        )
        return ofdm_demodulate(remove_cp(blocks, self.params.cp_length))
