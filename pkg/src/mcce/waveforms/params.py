"""Static dimensions and pilot layout of one multicarrier system."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from ..errors import DimensionError, ParameterError


class System(str, Enum):
    OFDM = "ofdm"
    GFDM = "gfdm"


@dataclass(frozen=True, slots=True)
class WaveformParams:
    """Dimensions of an OFDM frame or a GFDM block.

    For OFDM, ``subsymbols`` is the number of OFDM symbols per frame, each with its own
    cyclic prefix. For GFDM it is the number of subsymbols M in one block of N = M*K samples.
    """

    system: System
    subcarriers: int = 128
    subsymbols: int = 5
    pilot_spacing: int = 4
    cp_length: int = 8
    rolloff: float = 0.5
    overlap: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "system", System(self.system))
        if self.subcarriers < 1 or self.subsymbols < 1:
            raise DimensionError(
                f"subcarriers and subsymbols must be positive, got K={self.subcarriers} "
                f"M={self.subsymbols}"
            )
        if self.pilot_spacing < 1 or self.subcarriers % self.pilot_spacing:
            raise ParameterError(
                f"pilot spacing {self.pilot_spacing} must divide K={self.subcarriers}"
            )
        if self.cp_length < 0:
            raise ParameterError(f"cyclic prefix length must be non-negative, got {self.cp_length}")
        if self.system is System.GFDM:
            if not 0.0 < self.rolloff <= 1.0:
                raise ParameterError(f"roll-off must lie in (0, 1], got {self.rolloff}")
            if not 1 <= self.overlap <= self.subsymbols:
                raise ParameterError(
                    f"overlap factor must satisfy 1 <= delta <= M, got {self.overlap}",
                    hint="RRC filters occupy two subcarrier bands; use overlap=2",
                )
            if self.subcarriers % self.overlap:
                raise ParameterError(
                    f"overlap factor {self.overlap} must divide K={self.subcarriers}"
                )

    @property
    def block_length(self) -> int:
        """N = M*K samples per GFDM block or per OFDM frame (without prefixes)."""
        return self.subsymbols * self.subcarriers

    @property
    def n_pilots(self) -> int:
        return self.subcarriers // self.pilot_spacing

    @property
    def grid_size(self) -> int:
        """Length of the frequency grid the channel is estimated on."""
        return self.block_length if self.system is System.GFDM else self.subcarriers

    @property
    def cp_samples(self) -> int:
        """Prefix samples per frame: one per OFDM symbol, one per GFDM block."""
        if self.system is System.OFDM:
            return self.subsymbols * self.cp_length
        return self.cp_length

    @property
    def pilot_subcarriers(self) -> npt.NDArray[np.int64]:
        return np.arange(0, self.subcarriers, self.pilot_spacing, dtype=np.int64)

    @property
    def pilot_bins(self) -> npt.NDArray[np.int64]:
        """Pilot frequency bins on :attr:`grid_size`; GFDM pilots sit at subcarrier centres."""
        if self.system is System.GFDM:
            return self.pilot_subcarriers * self.subsymbols
        return self.pilot_subcarriers

    @property
    def pilot_stride(self) -> int:
        """Grid bins between neighbouring pilots."""
        return self.grid_size // self.n_pilots
