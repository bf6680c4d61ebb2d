"""GFDM modulation and demodulation in the frequency domain.

Each subcarrier k occupies an M*delta wide window of the N-point spectrum centred on bin
k*M. The window is filled with ``G_delta * S F_k`` where ``F_k`` is the M-point frequency
vector of the subcarrier: ``W_M d_k`` for data subcarriers and ``Gamma d_k`` for pilot
subcarriers, whose first frequency position carries the pilot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core import block_diag, circulant, dft_matrix, kronecker, repetition_matrix
from ..errors import DimensionError, FrameError, ParameterError, SubcarrierIndexError
from .framing import add_cp, extract_pilots
from .params import System, WaveformParams
from .prototype import PrototypeFilter, rrc_prototype


@dataclass(frozen=True, slots=True)
class GfdmFrame:
    """One GFDM block with its pilot and data symbol grids (both K x M)."""

    data_symbols: npt.NDArray[np.complex128]
    pilot_symbols: npt.NDArray[np.complex128]
    pilots: npt.NDArray[np.complex128]
    data_mask: npt.NDArray[np.bool_]
    time_signal: npt.NDArray[np.complex128]
    with_cp: npt.NDArray[np.complex128]

    @property
    def symbols(self) -> npt.NDArray[np.complex128]:
        """All transmitted symbols; pilot and data supports are disjoint."""
        return self.data_symbols + self.pilot_symbols


class GfdmModem:
    """Transmitter and matched-filter receiver for one GFDM configuration."""

    def __init__(self, params: WaveformParams, prototype: PrototypeFilter | None = None) -> None:
        if params.system is not System.GFDM:
            raise ParameterError(f"GfdmModem needs a GFDM configuration, got {params.system.value}")
        self.params = params
        self.prototype = prototype if prototype is not None else rrc_prototype(params)
        k, m, n = params.subcarriers, params.subsymbols, params.block_length
        window = m * params.overlap
        if window > n:
            raise ParameterError(f"window M*delta={window} exceeds block length N={n}")
        if self.prototype.G_delta.size != window:
            raise DimensionError(
                f"prototype response has {self.prototype.G_delta.size} entries, expected {window}"
            )

        self.offsets = self.prototype.offsets
        self.bins = (np.arange(k)[:, None] * m + self.offsets[None, :]) % n
        self._repeat = np.arange(window) % m

        gain = self.prototype.G_delta[0]
        if abs(gain) < 1e-12:
            raise ParameterError("prototype has no gain at the subcarrier centre")
        self.pilot_scale = 1.0 / abs(gain)
        self.pilot_gain = complex(self.pilot_scale * gain)

        self.pilot_rows = np.zeros(k, dtype=bool)
        self.pilot_rows[params.pilot_subcarriers] = True
        self.data_mask = np.ones((k, m), dtype=bool)
        self.data_mask[params.pilot_subcarriers, 0] = False

        self.data_precoder = dft_matrix(m)
        self.pilot_precoder = _pilot_permutation(m) @ _pilot_block(m, self.pilot_scale)
        self._data_decoder = self.data_precoder.conj().T
        self._pilot_decoder = np.linalg.inv(self.pilot_precoder)

    @property
    def data_symbols_per_frame(self) -> int:
        return int(self.data_mask.sum())

    # transmitter

    def frame(self, data: npt.ArrayLike, pilots: npt.ArrayLike) -> GfdmFrame:
        """Build a block from data symbols (row-major over data positions) and N_p pilots."""
        params = self.params
        values = np.asarray(data, dtype=np.complex128).ravel()
        pilot_values = np.asarray(pilots, dtype=np.complex128).ravel()
        if values.size != self.data_symbols_per_frame:
            raise DimensionError(
                f"expected {self.data_symbols_per_frame} data symbols, got {values.size}"
            )
        if pilot_values.size != params.n_pilots:
            raise DimensionError(f"expected {params.n_pilots} pilots, got {pilot_values.size}")

        grid = np.zeros((params.subcarriers, params.subsymbols), dtype=np.complex128)
        grid[self.data_mask] = values
        grid[params.pilot_subcarriers, 0] = pilot_values
        data_symbols = np.where(self.pilot_rows[:, None], 0.0, grid)
        pilot_symbols = np.where(self.pilot_rows[:, None], grid, 0.0)

        time_signal = self.modulate(data_symbols, pilot_symbols)
        return GfdmFrame(
            data_symbols=data_symbols,
            pilot_symbols=pilot_symbols,
            pilots=pilot_values,
            data_mask=self.data_mask,
            time_signal=time_signal,
            with_cp=add_cp(time_signal, params.cp_length),
        )

    def modulate(
        self,
        data_symbols: npt.ArrayLike,
        pilot_symbols: npt.ArrayLike | None = None,
    ) -> npt.NDArray[np.complex128]:
        data_grid = self._as_symbol_grid(data_symbols)
        pilot_grid = (
            np.zeros_like(data_grid) if pilot_symbols is None else self._as_symbol_grid(pilot_symbols)
        )
        self._check_disjoint(data_grid, pilot_grid)
        vectors = data_grid @ self.data_precoder.T + pilot_grid @ self.pilot_precoder.T
        return np.fft.ifft(self.spectrum(vectors), norm="ortho")

    def frequency_vectors(self, symbols: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Per-subcarrier M-point frequency vectors of a merged K x M symbol grid."""
        grid = self._as_symbol_grid(symbols)
        return np.where(
            self.pilot_rows[:, None],
            grid @ self.pilot_precoder.T,
            grid @ self.data_precoder.T,
        )

    def coefficients(self, vectors: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Window contents ``G_delta * S F_k`` of every subcarrier (K x M*delta)."""
        return self.prototype.G_delta[None, :] * np.asarray(vectors)[:, self._repeat]

    def spectrum(self, vectors: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        spectrum = np.zeros(self.params.block_length, dtype=np.complex128)
        np.add.at(spectrum, self.bins.ravel(), self.coefficients(vectors).ravel())
        return spectrum

    def subcarrier_spectra(self, vectors: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """N-grid contribution of each subcarrier, one row per subcarrier."""
        k = self.params.subcarriers
        spectra = np.zeros((k, self.params.block_length), dtype=np.complex128)
        spectra[np.arange(k)[:, None], self.bins] = self.coefficients(vectors)
        return spectra

    # receiver

    def windows(self, y_freq: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        spectrum = np.asarray(y_freq, dtype=np.complex128)
        if spectrum.shape != (self.params.block_length,):
            raise DimensionError(
                f"expected a spectrum of length {self.params.block_length}, got {spectrum.shape}"
            )
        return spectrum[self.bins]

    def matched_filter(self, windows: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """``S^T conj(G_delta)`` applied to every window; returns K x M frequency vectors."""
        p = self.params
        weighted = np.asarray(windows) * self.prototype.G_delta.conj()[None, :]
        return weighted.reshape(-1, p.overlap, p.subsymbols).sum(axis=1)

    def detect(self, vectors: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Undo the per-subcarrier precoding; pilot rows return the descaled pilot first."""
        values = np.asarray(vectors, dtype=np.complex128)
        return np.where(
            self.pilot_rows[:, None],
            values @ self._pilot_decoder.T,
            values @ self._data_decoder.T,
        )

    def adjacent_interference(self, vectors: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        """Contribution of subcarriers k-1 and k+1 inside the window of every subcarrier k."""
        k = self.params.subcarriers
        spectra = self.subcarrier_spectra(vectors)
        index = np.arange(k)
        previous = (index - 1) % k
        following = (index + 1) % k
        interference = np.where(
            (previous != index)[:, None], spectra[previous[:, None], self.bins], 0.0
        )
        distinct = (following != previous) & (following != index)
        interference += np.where(distinct[:, None], spectra[following[:, None], self.bins], 0.0)
        return interference

    def demodulate(self, y: npt.ArrayLike, subcarrier: int) -> npt.NDArray[np.complex128]:
        if not 0 <= subcarrier < self.params.subcarriers:
            raise SubcarrierIndexError(
                f"subcarrier {subcarrier} outside [0, {self.params.subcarriers})"
            )
        signal = np.asarray(y, dtype=np.complex128)
        if signal.shape != (self.params.block_length,):
            raise DimensionError(
                f"expected {self.params.block_length} samples, got {signal.shape}"
            )
        window = np.fft.fft(signal, norm="ortho")[self.bins[subcarrier]]
        vector = self.matched_filter(window[None, :])[0]
        return self._data_decoder @ vector

    def extract_pilots(self, y_freq: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        return extract_pilots(y_freq, self.params, pilot_gain=self.pilot_gain)

    # materialized operators of the matrix model, used for cross-checks

    def shift_matrix(self, subcarrier: int) -> npt.NDArray[np.complex128]:
        """N x M*delta operator placing a window at subcarrier ``subcarrier``."""
        p = self.params
        n = p.block_length
        selector = np.zeros(p.subcarriers)
        selector[subcarrier] = 1.0
        shift = kronecker(circulant(selector), np.eye(p.subsymbols))
        embed = np.zeros((n, self.offsets.size), dtype=np.complex128)
        embed[self.offsets % n, np.arange(self.offsets.size)] = 1.0
        return shift @ embed

    def transmit_matrix(self) -> npt.NDArray[np.complex128]:
        """Dense N x (K*M) map from the merged symbol grid (row-major) to time samples."""
        p = self.params
        n = p.block_length
        filter_matrix = np.diag(self.prototype.G_delta)
        repeat = repetition_matrix(p.subsymbols, p.overlap)
        inverse_dft = dft_matrix(n).conj().T
        columns = []
        for k in range(p.subcarriers):
            precoder = self.pilot_precoder if self.pilot_rows[k] else self.data_precoder
            columns.append(inverse_dft @ self.shift_matrix(k) @ filter_matrix @ repeat @ precoder)
        return np.hstack(columns)

    def _as_symbol_grid(self, symbols: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        grid = np.asarray(symbols, dtype=np.complex128)
        shape = (self.params.subcarriers, self.params.subsymbols)
        if grid.shape != shape:
            raise DimensionError(f"expected symbol grid of shape {shape}, got {grid.shape}")
        return grid

    def _check_disjoint(
        self,
        data_grid: npt.NDArray[np.complex128],
        pilot_grid: npt.NDArray[np.complex128],
    ) -> None:
        data_rows = np.any(data_grid != 0, axis=1)
        pilot_rows = np.any(pilot_grid != 0, axis=1)
        if np.any(data_rows & pilot_rows):
            raise FrameError(
                "pilot and data symbols overlap on a subcarrier",
                hint="a subcarrier carries either a data vector or a pilot block",
            )
        if np.any(pilot_rows & ~self.pilot_rows):
            raise FrameError(
                "pilot block placed on a data subcarrier",
                hint="pilot blocks belong on every p_s-th subcarrier",
            )


def _pilot_permutation(m: int) -> npt.NDArray[np.complex128]:
    # pilot stays at frequency position 0, the subcarrier centre
    return np.eye(m, dtype=np.complex128)


def _pilot_block(m: int, scale: float) -> npt.NDArray[np.complex128]:
    if m == 1:
        return np.array([[scale]], dtype=np.complex128)
    return block_diag(np.array([[scale]]), dft_matrix(m - 1))


def gfdm_modulate_direct(
    d: npt.ArrayLike,
    g: PrototypeFilter | npt.ArrayLike,
) -> npt.NDArray[np.complex128]:
    """Direct sum over subcarriers and subsymbols of circularly shifted, modulated pulses."""
    symbols = np.asarray(d, dtype=np.complex128)
    pulse = np.asarray(g.g if isinstance(g, PrototypeFilter) else g, dtype=np.complex128)
    if symbols.ndim != 2:
        raise DimensionError(f"expected a K x M symbol grid, got shape {symbols.shape}")
    k, m = symbols.shape
    if pulse.shape != (k * m,):
        raise DimensionError(f"pulse length {pulse.size} does not equal K*M={k * m}")
    # sum_k d_k[m] exp(j 2 pi k n / K) is K-periodic in n
    carriers = np.fft.ifft(symbols, axis=0) * k
    x = np.zeros(k * m, dtype=np.complex128)
    for sub in range(m):
        x += np.roll(pulse, sub * k) * np.tile(carriers[:, sub], m)
    return x


def gfdm_modulate_matrix(
    frame: GfdmFrame,
    params: WaveformParams,
    prototype: PrototypeFilter,
) -> npt.NDArray[np.complex128]:
    return GfdmModem(params, prototype).modulate(frame.data_symbols, frame.pilot_symbols)


def gfdm_demodulate(
    y: npt.ArrayLike,
    subcarrier: int,
    params: WaveformParams,
    prototype: PrototypeFilter,
) -> npt.NDArray[np.complex128]:
    return GfdmModem(params, prototype).demodulate(y, subcarrier)
