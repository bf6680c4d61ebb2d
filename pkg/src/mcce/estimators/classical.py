"""Least-squares and LMMSE estimation at the pilot positions."""

from __future__ import annotations

import threading

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ..channel.covariance import CovarianceMatrix
from ..errors import ContractViolationError, DimensionError
from .observation import EstimateResult, EstimatorKind, PilotObservation

HERMITIAN_TOLERANCE = 1e-10


class LsEstimator:
    kind = EstimatorKind.LS

    def estimate(self, obs: PilotObservation) -> EstimateResult:
        return EstimateResult(kind=self.kind, h_pilot=obs.ls_response())


class LmmseEstimator:
    """Shrinks the LS estimate with ``R (R + sigma^2 I)^{-1}``.

    R is decomposed once; the filter for each noise variance is built on first use and
    reused, so a call costs one N_p x N_p product.
    """

    kind = EstimatorKind.LMMSE

    def __init__(self, covariance: CovarianceMatrix) -> None:
        entries = covariance.entries
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f"covariance must be square, got shape {entries.shape}")
        if not np.allclose(entries, entries.conj().T, rtol=0.0, atol=HERMITIAN_TOLERANCE):
            raise ContractViolationError("LMMSE covariance is not Hermitian")
        eigenvalues, eigenvectors = linalg.eigh(entries)
        self._eigenvalues = np.clip(eigenvalues, 0.0, None)
        self._eigenvectors = eigenvectors
        self._filters: dict[float, npt.NDArray[np.complex128]] = {}
        self._lock = threading.Lock()

    @property
    def size(self) -> int:
        return int(self._eigenvalues.size)

    def filter(self, noise_variance: float) -> npt.NDArray[np.complex128]:
        with self._lock:
            cached = self._filters.get(noise_variance)
            if cached is None:
                lam = self._eigenvalues
                denominator = lam + noise_variance
                gains = np.divide(lam, denominator, out=np.zeros_like(lam), where=denominator > 0)
                cached = (self._eigenvectors * gains[None, :]) @ self._eigenvectors.conj().T
                self._filters[noise_variance] = cached
            return cached

    def estimate(self, obs: PilotObservation) -> EstimateResult:
        if obs.n_pilots != self.size:
            raise DimensionError(f"expected {self.size} pilots, got {obs.n_pilots}")
        h_ls = obs.ls_response()
        return EstimateResult(kind=self.kind, h_pilot=self.filter(obs.noise_variance) @ h_ls)


def ls_estimate(obs: PilotObservation) -> EstimateResult:
    return LsEstimator().estimate(obs)


def lmmse_estimate(obs: PilotObservation, covariance: CovarianceMatrix) -> EstimateResult:
    return LmmseEstimator(covariance).estimate(obs)
