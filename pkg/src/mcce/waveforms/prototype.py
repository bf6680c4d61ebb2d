"""Root-raised-cosine prototype filter for GFDM."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import ParameterError
from .params import WaveformParams

# magnitude below which a frequency response entry counts as outside the support
SUPPORT_TOLERANCE = 1e-6


@dataclass(frozen=True, slots=True)
class PrototypeFilter:
    """Unit-energy pulse ``g`` plus its decimated frequency response.

    ``offsets[i]`` is the signed bin offset, relative to the subcarrier centre on the N-grid,
    carried by ``G_delta[i]``. Entries are in DFT order.
    """

    g: npt.NDArray[np.float64]
    g_delta: npt.NDArray[np.float64]
    G_delta: npt.NDArray[np.complex128]
    offsets: npt.NDArray[np.int64]
    subcarriers: int

    @property
    def spectrum(self) -> npt.NDArray[np.complex128]:
        """N-point frequency response on the same scale as ``G_delta``."""
        return np.fft.fft(self.g) / np.sqrt(self.subcarriers)

    def support_width(self) -> int:
        return int(np.count_nonzero(np.abs(self.spectrum) > SUPPORT_TOLERANCE))

    def out_of_band_energy(self, bands: float = 1.0) -> float:
        """Fraction of spectral energy farther than ``bands``/2 subcarrier widths from centre."""
        n = self.g.size
        m = n // self.subcarriers
        offsets = np.fft.fftfreq(n, d=1.0 / n)
        power = np.abs(self.spectrum) ** 2
        outside = np.abs(offsets) > bands * m / 2.0
        return float(power[outside].sum() / power.sum())


def raised_cosine_spectrum(f: npt.ArrayLike, alpha: float) -> npt.NDArray[np.float64]:
    """Raised-cosine spectrum over frequency in units of the symbol rate."""
    freq = np.abs(np.asarray(f, dtype=np.float64))
    lower = (1.0 - alpha) / 2.0
    upper = (1.0 + alpha) / 2.0
    out = np.zeros_like(freq)
    out[freq <= lower] = 1.0
    ramp = (freq > lower) & (freq <= upper)
    out[ramp] = 0.5 * (1.0 + np.cos(np.pi / alpha * (freq[ramp] - lower)))
    return out


def rrc_impulse(t: npt.ArrayLike, alpha: float) -> npt.NDArray[np.float64]:
    """Closed-form RRC impulse response, ``t`` in symbol periods.

    The removable singularities at t = 0 and |t| = 1/(4 alpha) are replaced by their limits.
    """
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"roll-off must lie in (0, 1], got {alpha}")
    time = np.asarray(t, dtype=np.float64)
    out = np.empty_like(time)

    at_zero = np.isclose(time, 0.0, atol=1e-12)
    at_edge = np.isclose(np.abs(time), 1.0 / (4.0 * alpha), atol=1e-12)
    regular = ~(at_zero | at_edge)

    out[at_zero] = 1.0 - alpha + 4.0 * alpha / np.pi
    out[at_edge] = (alpha / np.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * alpha))
        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * alpha))
    )
    tr = time[regular]
    numerator = np.sin(np.pi * tr * (1.0 - alpha)) + 4.0 * alpha * tr * np.cos(
        np.pi * tr * (1.0 + alpha)
    )
    denominator = np.pi * tr * (1.0 - (4.0 * alpha * tr) ** 2)
    out[regular] = numerator / denominator
    return out


def band_offsets(subsymbols: int, overlap: int) -> npt.NDArray[np.int64]:
    """Signed N-grid offsets covered by an M*delta window, in DFT order."""
    width = subsymbols * overlap
    index = np.arange(width, dtype=np.int64)
    return np.where(index < width - width // 2, index, index - width)


def rrc_prototype(params: WaveformParams) -> PrototypeFilter:
    """Periodized RRC pulse of length N with unit energy.

    Built by sampling the RRC spectrum on the N-point DFT grid, which equals the closed-form
    pulse sampled K times per symbol and periodized over N without truncation.
    """
    alpha = params.rolloff
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"roll-off must lie in (0, 1], got {alpha}")
    k, m, delta = params.subcarriers, params.subsymbols, params.overlap
    n = params.block_length
    if m * delta > n:
        raise ParameterError(f"window M*delta={m * delta} exceeds block length N={n}")

    bins = np.fft.fftfreq(n, d=1.0 / n)
    spectrum = np.sqrt(raised_cosine_spectrum(bins / m, alpha))
    g = np.fft.ifft(spectrum).real
    g /= np.linalg.norm(g)

    g_delta = g[:: k // delta]
    G_delta = np.sqrt(n / delta) * np.fft.fft(g_delta, norm="ortho")
    offsets = band_offsets(m, delta)

    neighbour_bins = (offsets % m == 0) & (offsets != 0)
    if np.any(np.abs(G_delta[neighbour_bins]) > SUPPORT_TOLERANCE):
        raise ParameterError(
            "prototype response at neighbouring subcarrier centres is not null; "
            "pilots would not be interference-free",
            hint="use a roll-off in (0, 1] with overlap=2",
        )

    return PrototypeFilter(
        g=g,
        g_delta=g_delta,
        G_delta=G_delta.astype(np.complex128),
        offsets=offsets,
        subcarriers=k,
    )
