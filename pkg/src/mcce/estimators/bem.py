"""Basis-expansion estimators: LS-BEM, LMMSE-BEM and the approximated-prior variant.

The LMMSE-BEM coefficients are computed in the dual form
``R_a B^H (B R_a B^H + sigma^2 I)^{-1} h_LS``, factored through ``R_a = S S^H`` as
``S (S^H B^H B S + sigma^2 I)^{-1} S^H B^H h_LS``. R_a is never inverted, so the
rank-deficient coefficient covariance of a short delay prior is handled directly.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import linalg

from ..channel.covariance import CovarianceKind, CovarianceMatrix, approx_pilot_covariance
from ..errors import ContractViolationError, DimensionError
from .basis import BasisGrid, BasisMatrix
from .observation import EstimateResult, EstimatorKind, PilotObservation

PSD_REPAIR_WARNING = 1e-10
# eigenvalues of R_a below this fraction of the largest are treated as zero
RANK_FLOOR = 1e-12


@dataclass(frozen=True, slots=True)
class CoefficientCovariance:
    entries: npt.NDArray[np.complex128]
    repair: float = 0.0
    warnings: tuple[str, ...] = ()


def coefficient_covariance(
    covariance: CovarianceMatrix | npt.ArrayLike,
    basis: BasisMatrix,
) -> CoefficientCovariance:
    """``(B^H B)^{-1} B^H R B (B^H B)^{-1}``, symmetrized with eigenvalues floored at zero."""
    projector = _pilot_projector(basis)
    entries = covariance.entries if isinstance(covariance, CovarianceMatrix) else np.asarray(covariance)
    if entries.shape != (basis.n_rows, basis.n_rows):
        raise DimensionError(
            f"covariance of shape {entries.shape} does not match {basis.n_rows} basis rows"
        )
    raw = projector @ entries @ projector.conj().T
    symmetric = 0.5 * (raw + raw.conj().T)
    eigenvalues, eigenvectors = linalg.eigh(symmetric)
    floored = np.clip(eigenvalues, 0.0, None)
    repaired = (eigenvectors * floored[None, :]) @ eigenvectors.conj().T
    repair = float(np.max(np.abs(repaired - raw)))
    warnings: tuple[str, ...] = ()
    if repair > PSD_REPAIR_WARNING:
        warnings = (f"coefficient covariance repaired to PSD (max change {repair:.3g})",)
    repaired.setflags(write=False)
    return CoefficientCovariance(entries=repaired, repair=repair, warnings=warnings)


class LsBemEstimator:
    kind = EstimatorKind.LS_BEM

    def __init__(self, basis: BasisMatrix) -> None:
        self.basis = basis
        self._projector = _pilot_projector(basis)

    def estimate(self, obs: PilotObservation) -> EstimateResult:
        _check_rows(obs, self.basis)
        a_hat = self._projector @ obs.ls_response()
        return _bem_result(self.kind, self.basis, a_hat, self.basis.warnings)


class LmmseBemEstimator:
    """LMMSE-BEM with a given coefficient covariance; filters are cached per noise variance."""

    kind = EstimatorKind.LMMSE_BEM

    def __init__(
        self,
        basis: BasisMatrix,
        coefficient_cov: CoefficientCovariance | npt.ArrayLike,
    ) -> None:
        self.basis = basis
        self._projector = _pilot_projector(basis)
        prior = (
            coefficient_cov
            if isinstance(coefficient_cov, CoefficientCovariance)
            else coefficient_covariance_from_entries(coefficient_cov)
        )
        if prior.entries.shape != (basis.n_coefficients, basis.n_coefficients):
            raise DimensionError(
                f"coefficient covariance of shape {prior.entries.shape} does not match "
                f"{basis.n_coefficients} basis functions"
            )
        self._warnings = basis.warnings + prior.warnings

        eigenvalues, eigenvectors = linalg.eigh(prior.entries)
        top = float(eigenvalues.max(initial=0.0))
        keep = eigenvalues > RANK_FLOOR * top if top > 0 else np.zeros_like(eigenvalues, dtype=bool)
        self._factor = eigenvectors[:, keep] * np.sqrt(eigenvalues[keep])[None, :]
        self._weighted = basis.matrix @ self._factor
        self._gram = self._weighted.conj().T @ self._weighted
        self._rank = int(keep.sum())
        self._filters: dict[float, tuple[npt.NDArray[np.complex128], tuple[str, ...]]] = {}
        self._lock = threading.Lock()

    @property
    def rank(self) -> int:
        return self._rank

    def filter(self, noise_variance: float) -> tuple[npt.NDArray[np.complex128], tuple[str, ...]]:
        """N_a x N_p map from LS pilot estimates to coefficients, plus any warnings."""
        with self._lock:
            cached = self._filters.get(noise_variance)
            if cached is None:
                cached = self._build_filter(noise_variance)
                self._filters[noise_variance] = cached
            return cached

    def _build_filter(self, noise_variance: float) -> tuple[npt.NDArray[np.complex128], tuple[str, ...]]:
        n_rows = self.basis.n_rows
        if noise_variance == 0 and self._rank < n_rows:
            return self._projector, (
                "noise variance is zero and B R_a B^H is rank deficient; using LS-BEM",
            )
        if self._rank == 0:
            return np.zeros((self.basis.n_coefficients, n_rows), dtype=np.complex128), ()
        system = self._gram + noise_variance * np.eye(self._rank)
        solved = linalg.solve(system, self._weighted.conj().T, assume_a="pos")
        return self._factor @ solved, ()

    def estimate(self, obs: PilotObservation) -> EstimateResult:
        _check_rows(obs, self.basis)
        matrix, notes = self.filter(obs.noise_variance)
        a_hat = matrix @ obs.ls_response()
        return _bem_result(self.kind, self.basis, a_hat, self._warnings + notes)


class AlmmseBemEstimator(LmmseBemEstimator):
    """LMMSE-BEM whose prior assumes a constant PDP of 1/L over the cyclic prefix.

    Every channel-independent factor is fixed at construction.
    """

    kind = EstimatorKind.ALMMSE_BEM

    def __init__(self, basis: BasisMatrix, approx_covariance: CovarianceMatrix) -> None:
        if approx_covariance.kind is not CovarianceKind.APPROXIMATED:
            raise ContractViolationError(
                "aLMMSE-BEM requires the approximated covariance",
                hint="build it with approx_pilot_covariance",
            )
        super().__init__(basis, coefficient_covariance(approx_covariance, basis))

    @classmethod
    def for_layout(
        cls,
        basis: BasisMatrix,
        cp_length: int,
        subcarriers: int,
        pilot_spacing: int,
        n_pilots: int,
    ) -> AlmmseBemEstimator:
        return cls(basis, approx_pilot_covariance(cp_length, subcarriers, pilot_spacing, n_pilots))


def coefficient_covariance_from_entries(entries: npt.ArrayLike) -> CoefficientCovariance:
    matrix = np.asarray(entries, dtype=np.complex128)
    if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=1e-10):
        raise ContractViolationError("coefficient covariance is not Hermitian")
    return CoefficientCovariance(entries=matrix)


def ls_bem_estimate(obs: PilotObservation, basis: BasisMatrix) -> EstimateResult:
    return LsBemEstimator(basis).estimate(obs)


def lmmse_bem_estimate(
    obs: PilotObservation,
    basis: BasisMatrix,
    coefficient_cov: CoefficientCovariance | npt.ArrayLike,
) -> EstimateResult:
    return LmmseBemEstimator(basis, coefficient_cov).estimate(obs)


def almmse_bem_estimate(
    obs: PilotObservation,
    basis: BasisMatrix,
    approx_covariance: CovarianceMatrix,
) -> EstimateResult:
    return AlmmseBemEstimator(basis, approx_covariance).estimate(obs)


def lmmse_bem_primal(
    obs: PilotObservation,
    basis: BasisMatrix,
    coefficient_cov: npt.ArrayLike,
) -> npt.NDArray[np.complex128]:
    """Coefficients from ``(B^H B + sigma^2 R_a^{-1})^{-1} B^H h_LS``; R_a must be invertible."""
    prior = np.asarray(coefficient_cov, dtype=np.complex128)
    matrix = basis.matrix
    system = matrix.conj().T @ matrix + obs.noise_variance * linalg.inv(prior)
    return linalg.solve(system, matrix.conj().T @ obs.ls_response())


def _pilot_projector(basis: BasisMatrix) -> npt.NDArray[np.complex128]:
    if basis.grid is not BasisGrid.PILOT or basis.projector is None:
        raise ContractViolationError("BEM estimation needs a basis on the pilot grid")
    return basis.projector


def _check_rows(obs: PilotObservation, basis: BasisMatrix) -> None:
    if obs.n_pilots != basis.n_rows:
        raise DimensionError(f"basis has {basis.n_rows} rows but {obs.n_pilots} pilots were observed")


def _bem_result(
    kind: EstimatorKind,
    basis: BasisMatrix,
    a_hat: npt.NDArray[np.complex128],
    warnings: tuple[str, ...],
) -> EstimateResult:
    return EstimateResult(
        kind=kind,
        h_pilot=basis.evaluate(a_hat),
        a_hat=a_hat,
        basis=basis,
        warnings=warnings,
    )
