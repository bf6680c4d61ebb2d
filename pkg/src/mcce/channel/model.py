"""Tapped-delay-line fading channel with fractional delays and AWGN."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError, ModelViolationError, ParameterError
from ..waveforms.framing import add_cp, remove_cp
from ..waveforms.params import WaveformParams

SeedLike = int | np.random.SeedSequence | np.random.Generator | None

MULTIPATH_DELAYS = (0.0, 2.7, 3.1, 4.9)
MULTIPATH_POWERS = (1.0, 0.5, 0.25, 0.125)


class FadingModel(str, Enum):
    RAYLEIGH = "rayleigh"
    STATIC = "static"


@dataclass(frozen=True, slots=True)
class ChannelSpec:
    """Delays in samples and linear tap powers, normalized on construction to unit sum."""

    delays: tuple[float, ...]
    powers: tuple[float, ...]
    cp_length: int
    model: FadingModel = FadingModel.RAYLEIGH

    def __post_init__(self) -> None:
        delays = tuple(float(value) for value in self.delays)
        powers = tuple(float(value) for value in self.powers)
        if not delays or len(delays) != len(powers):
            raise ParameterError(
                f"need one power per delay, got {len(delays)} delays and {len(powers)} powers"
            )
        if delays[0] < 0 or any(b <= a for a, b in zip(delays, delays[1:])):
            raise ParameterError(f"delays must be non-negative and strictly increasing: {delays}")
        if any(power <= 0 for power in powers):
            raise ParameterError(f"tap powers must be positive: {powers}")
        _check_delay_spread(max(delays), self.cp_length)
        total = sum(powers)
        object.__setattr__(self, "delays", delays)
        object.__setattr__(self, "powers", tuple(power / total for power in powers))
        object.__setattr__(self, "model", FadingModel(self.model))

    @property
    def n_taps(self) -> int:
        return len(self.delays)

    @classmethod
    def multipath(cls, cp_length: int = 8, model: FadingModel = FadingModel.RAYLEIGH) -> ChannelSpec:
        """Four-tap profile (1, 0.5, 0.25, 0.125) at delays (0, 2.7, 3.1, 4.9) samples."""
        return cls(MULTIPATH_DELAYS, MULTIPATH_POWERS, cp_length, model)

    @classmethod
    def flat(cls, cp_length: int = 0, model: FadingModel = FadingModel.RAYLEIGH) -> ChannelSpec:
        return cls((0.0,), (1.0,), cp_length, model)


@dataclass(frozen=True, slots=True)
class ChannelRealization:
    gains: npt.NDArray[np.complex128]
    delays: npt.NDArray[np.float64]
    grid_size: int
    freq_response: npt.NDArray[np.complex128] = field(repr=False)


def frequency_response(
    gains: npt.ArrayLike,
    delays: npt.ArrayLike,
    grid_size: int,
) -> npt.NDArray[np.complex128]:
    """H[b] = sum_l h_l exp(-j 2 pi b tau_l / grid_size)."""
    bins = np.arange(grid_size)[:, None]
    steering = np.exp(-2j * np.pi * bins * np.asarray(delays, dtype=np.float64)[None, :] / grid_size)
    return steering @ np.asarray(gains, dtype=np.complex128)


def complex_gaussian(shape: int | tuple[int, ...], rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """Unit-variance circular complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_channel(spec: ChannelSpec, grid_size: int, rng: SeedLike = None) -> ChannelRealization:
    if grid_size < 1:
        raise DimensionError(f"grid size must be positive, got {grid_size}")
    generator = np.random.default_rng(rng)
    powers = np.asarray(spec.powers)
    if spec.model is FadingModel.RAYLEIGH:
        gains = np.sqrt(powers) * complex_gaussian(spec.n_taps, generator)
    else:
        gains = np.sqrt(powers).astype(np.complex128)
    delays = np.asarray(spec.delays)
    return ChannelRealization(
        gains=gains,
        delays=delays,
        grid_size=grid_size,
        freq_response=frequency_response(gains, delays, grid_size),
    )


def apply_channel(
    x_cp: npt.ArrayLike,
    realization: ChannelRealization,
    params: WaveformParams,
) -> npt.NDArray[np.complex128]:
    """Circular convolution of every prefixed block, applied as a spectral product.

    The last axis holds one block plus its prefix; OFDM frames pass M rows.
    """
    signal = np.asarray(x_cp, dtype=np.complex128)
    cp_length = params.cp_length
    _check_delay_spread(float(realization.delays.max()), cp_length)
    if signal.shape[-1] != realization.grid_size + cp_length:
        raise DimensionError(
            f"block length {signal.shape[-1]} does not match grid {realization.grid_size} "
            f"plus prefix {cp_length}"
        )
    block = remove_cp(signal, cp_length)
    faded = np.fft.ifft(np.fft.fft(block, axis=-1) * realization.freq_response, axis=-1)
    return add_cp(faded, cp_length)


def add_awgn(
    y: npt.ArrayLike,
    noise_variance: float,
    rng: SeedLike = None,
) -> npt.NDArray[np.complex128]:
    signal = np.asarray(y, dtype=np.complex128)
    if noise_variance < 0:
        raise ParameterError(f"noise variance must be non-negative, got {noise_variance}")
    if noise_variance == 0:
        return signal.copy()
    noise = complex_gaussian(signal.shape, np.random.default_rng(rng))
    return signal + np.sqrt(noise_variance) * noise


def _check_delay_spread(max_delay: float, cp_length: int) -> None:
    if max_delay > 0 and max_delay >= cp_length:
        raise ModelViolationError(
            f"delay spread {max_delay} samples is not covered by a prefix of {cp_length}",
            hint="increase the cyclic prefix or shorten the delay profile",
        )
