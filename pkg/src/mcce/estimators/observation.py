"""Pilot observations and estimator results."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Protocol

import numpy as np
import numpy.typing as npt

from ..errors import ConfigError, ContractViolationError, DimensionError, SingularPilotError

if TYPE_CHECKING:
    from .basis import BasisMatrix

UNIT_MODULUS_TOLERANCE = 1e-9


class EstimatorKind(str, Enum):
    LS = "ls"
    LMMSE = "lmmse"
    LS_BEM = "ls_bem"
    LMMSE_BEM = "lmmse_bem"
    ALMMSE_BEM = "almmse_bem"
    PERFECT = "perfect"

    @property
    def label(self) -> str:
        """Name used on the command line and in reports."""
        return self.value.replace("_", "-")

    @property
    def is_bem(self) -> bool:
        return self in {EstimatorKind.LS_BEM, EstimatorKind.LMMSE_BEM, EstimatorKind.ALMMSE_BEM}

    @classmethod
    def parse(cls, name: str) -> EstimatorKind:
        normalized = name.strip().lower().replace("-", "_")
        try:
            return cls(normalized)
        except ValueError as exc:
            allowed = ", ".join(kind.label for kind in cls)
            raise ConfigError(f"unknown estimator: {name}", hint=f"allowed values: {allowed}") from exc


@dataclass(frozen=True, slots=True)
class PilotObservation:
    """Received and transmitted pilots with the noise variance seen at the pilot bins.

    ``noise_variance`` equals ``beta / snr_linear``; beta is 1 for QPSK.
    """

    y_p: npt.NDArray[np.complex128]
    x_p: npt.NDArray[np.complex128]
    noise_variance: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        y_p = np.asarray(self.y_p, dtype=np.complex128)
        x_p = np.asarray(self.x_p, dtype=np.complex128)
        if y_p.ndim != 1 or y_p.shape != x_p.shape:
            raise DimensionError(
                f"pilot vectors must be 1-D and equal in length, got {y_p.shape} and {x_p.shape}"
            )
        if self.noise_variance < 0:
            raise ContractViolationError(
                f"noise variance must be non-negative, got {self.noise_variance}"
            )
        object.__setattr__(self, "y_p", y_p)
        object.__setattr__(self, "x_p", x_p)

    @classmethod
    def from_snr(
        cls,
        y_p: npt.ArrayLike,
        x_p: npt.ArrayLike,
        snr_linear: float,
        beta: float = 1.0,
    ) -> PilotObservation:
        if snr_linear <= 0:
            raise ContractViolationError(f"SNR must be positive, got {snr_linear}")
        return cls(np.asarray(y_p), np.asarray(x_p), beta / snr_linear, beta)

    @property
    def n_pilots(self) -> int:
        return int(self.y_p.size)

    @property
    def snr_linear(self) -> float:
        return float("inf") if self.noise_variance == 0 else self.beta / self.noise_variance

    def ls_response(self) -> npt.NDArray[np.complex128]:
        """Per-pilot division ``y_p / x_p``; pilots must be non-zero and unit modulus."""
        magnitude = np.abs(self.x_p)
        if np.any(magnitude == 0):
            raise SingularPilotError(
                f"pilot symbol at position {int(np.argmin(magnitude))} is zero"
            )
        if np.any(np.abs(magnitude - 1.0) > UNIT_MODULUS_TOLERANCE):
            raise ContractViolationError("pilot symbols must have unit modulus")
        return self.y_p / self.x_p


@dataclass(frozen=True, slots=True)
class EstimateResult:
    kind: EstimatorKind
    h_pilot: npt.NDArray[np.complex128]
    h_full: npt.NDArray[np.complex128] | None = None
    a_hat: npt.NDArray[np.complex128] | None = None
    basis: BasisMatrix | None = None
    warnings: tuple[str, ...] = ()


class ChannelEstimator(Protocol):
    kind: EstimatorKind

    def estimate(self, obs: PilotObservation) -> EstimateResult: ...
