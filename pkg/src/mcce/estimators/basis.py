"""Complex-exponential and Legendre-polynomial basis matrices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt
from numpy.polynomial import legendre
from scipy import linalg

from ..errors import DecompositionError, DimensionError, ParameterError

CONDITION_WARNING = 1e8
RANK_TOLERANCE = 1e-10


class BasisKind(str, Enum):
    CE = "ce"
    LP = "lp"


class BasisGrid(str, Enum):
    PILOT = "pilot"
    FULL = "full"


@dataclass(frozen=True, slots=True)
class BasisMatrix:
    """Basis functions as columns.

    On the pilot grid ``projector`` holds ``(B^H B)^{-1} B^H``, computed from a QR factorization
    of ``matrix`` so that coefficients stay those of the raw columns.
    """

    matrix: npt.NDArray[np.complex128]
    kind: BasisKind
    grid: BasisGrid
    condition_number: float
    projector: npt.NDArray[np.complex128] | None = None
    warnings: tuple[str, ...] = ()

    @property
    def n_rows(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n_coefficients(self) -> int:
        return int(self.matrix.shape[1])

    def evaluate(self, coefficients: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        return self.matrix @ np.asarray(coefficients, dtype=np.complex128)


def ce_basis(
    n_rows: int,
    n_coefficients: int,
    pilot_spacing: int,
    subcarriers: int,
    grid: BasisGrid = BasisGrid.PILOT,
) -> BasisMatrix:
    """Column t holds exp(-j 2 pi f t) for the normalized frequency f of each row.

    Pilot rows sit at bins p_s*q of the K grid; full-grid rows are the bins of an
    ``n_rows``-point grid, so pilot rows of both grids coincide.
    """
    _check_shape(n_rows, n_coefficients)
    if grid is BasisGrid.PILOT:
        freqs = pilot_spacing * np.arange(n_rows) / subcarriers
    else:
        freqs = np.arange(n_rows) / n_rows
    matrix = np.exp(-2j * np.pi * freqs[:, None] * np.arange(n_coefficients)[None, :])
    return _finalize(matrix, BasisKind.CE, grid)


def lp_basis(
    n_rows: int,
    n_coefficients: int,
    grid: BasisGrid = BasisGrid.PILOT,
    *,
    n_pilots: int | None = None,
) -> BasisMatrix:
    """Column t holds the Legendre polynomial of degree t on rows mapped onto [-1, 1].

    Pilot rows span [-1, 1] evenly. On the full grid ``n_pilots`` fixes where the pilots
    fall, so bins past the last pilot extend slightly beyond 1.
    """
    _check_shape(n_rows, n_coefficients)
    if grid is BasisGrid.PILOT:
        coords = np.linspace(-1.0, 1.0, n_rows) if n_rows > 1 else np.zeros(1)
    else:
        if n_pilots is None or n_pilots < 1 or n_rows % n_pilots:
            raise ParameterError(
                f"full-grid Legendre basis needs a pilot count dividing {n_rows}, got {n_pilots}"
            )
        span = (n_rows // n_pilots) * (n_pilots - 1)
        coords = -1.0 + 2.0 * np.arange(n_rows) / span if span else np.zeros(n_rows)
    matrix = legendre.legvander(coords, n_coefficients - 1).astype(np.complex128)
    return _finalize(matrix, BasisKind.LP, grid)


def _check_shape(n_rows: int, n_coefficients: int) -> None:
    if n_coefficients < 1 or n_rows < 1:
        raise DimensionError(f"basis needs positive dimensions, got {n_rows} x {n_coefficients}")
    if n_coefficients > n_rows:
        raise DimensionError(
            f"{n_coefficients} basis functions overdetermine {n_rows} rows",
            hint="use at most as many basis functions as pilots",
        )


def _finalize(matrix: npt.NDArray[np.complex128], kind: BasisKind, grid: BasisGrid) -> BasisMatrix:
    matrix.setflags(write=False)
    condition = float(np.linalg.cond(matrix))
    warnings: list[str] = []
    if not np.isfinite(condition) or condition > CONDITION_WARNING:
        warnings.append(f"{kind.value} basis on the {grid.value} grid has condition number {condition:.3g}")

    projector = None
    if grid is BasisGrid.PILOT:
        q, r = linalg.qr(matrix, mode="economic")
        diagonal = np.abs(np.diag(r))
        if diagonal.min() <= RANK_TOLERANCE * diagonal.max():
            raise DecompositionError(
                f"{kind.value} basis with {matrix.shape[1]} columns is rank deficient",
                hint="reduce the number of basis functions",
            )
        projector = linalg.solve_triangular(r, q.conj().T)
        projector.setflags(write=False)

    return BasisMatrix(
        matrix=matrix,
        kind=kind,
        grid=grid,
        condition_number=condition,
        projector=projector,
        warnings=tuple(warnings),
    )
