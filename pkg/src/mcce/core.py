"""Shared numeric primitives: unitary DFT, structured matrices and QPSK."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .errors import DimensionError, FramingError

ComplexGrid = npt.NDArray[np.complex128]
"""2-D complex array; every matrix symbol of the signal model is one of these."""

QPSK_SCALE = 1.0 / np.sqrt(2.0)

# Gray map, bit pair (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)
QPSK_ALPHABET: npt.NDArray[np.complex128] = np.array(
    [1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j], dtype=np.complex128
) * QPSK_SCALE


def as_grid(data: npt.ArrayLike) -> ComplexGrid:
    """Coerce to a finite 2-D complex array."""
    grid = np.asarray(data, dtype=np.complex128)
    if grid.ndim != 2 or grid.size == 0:
        raise DimensionError(f"expected a non-empty 2-D array, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise DimensionError("grid contains non-finite entries")
    return grid


def dft_matrix(n: int) -> ComplexGrid:
    """Unitary DFT matrix with W[a, b] = exp(-j 2 pi a b / n) / sqrt(n)."""
    if n < 1:
        raise DimensionError(f"DFT size must be positive, got {n}")
    return linalg.dft(n, scale="sqrtn").astype(np.complex128)


def circulant(v: npt.ArrayLike) -> ComplexGrid:
    """Circulant matrix whose column c is ``v`` circularly shifted down by c."""
    vector = np.asarray(v, dtype=np.complex128).ravel()
    if vector.size == 0:
        raise DimensionError("circulant requires a non-empty vector")
    return linalg.circulant(vector)


def kronecker(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexGrid:
    left = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    right = np.atleast_2d(np.asarray(b, dtype=np.complex128))
    if left.size == 0 or right.size == 0:
        raise DimensionError("kronecker requires non-empty operands")
    return np.kron(left, right)


def block_diag(*blocks: npt.ArrayLike) -> ComplexGrid:
    if not blocks:
        raise DimensionError("block_diag requires at least one block")
    return linalg.block_diag(*[np.atleast_2d(np.asarray(b, dtype=np.complex128)) for b in blocks])


def repetition_matrix(m: int, delta: int) -> ComplexGrid:
    """The delta-fold repetition matrix ``1_{delta,1} (x) I_m``."""
    return kronecker(np.ones((delta, 1)), np.eye(m))


def qpsk_map(bits: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Gray-map a flat bit stream onto unit-energy QPSK symbols."""
    stream = np.asarray(bits, dtype=np.int64).ravel()
    if stream.size % 2:
        raise FramingError(f"QPSK mapping needs an even bit count, got {stream.size}")
    if np.any((stream != 0) & (stream != 1)):
        raise FramingError("bit stream may only contain 0 and 1")
    pairs = stream.reshape(-1, 2)
    return ((1 - 2 * pairs[:, 0]) + 1j * (1 - 2 * pairs[:, 1])) * QPSK_SCALE


def qpsk_slice(symbols: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Nearest QPSK point; zero real or imaginary parts go to the positive side."""
    values = np.asarray(symbols, dtype=np.complex128)
    real = np.where(values.real >= 0.0, 1.0, -1.0)
    imag = np.where(values.imag >= 0.0, 1.0, -1.0)
    return (real + 1j * imag) * QPSK_SCALE


def qpsk_demap(symbols: npt.ArrayLike) -> npt.NDArray[np.int8]:
    """Inverse of :func:`qpsk_map` after slicing; the output has a trailing bit axis of 2."""
    sliced = qpsk_slice(symbols)
    bits = np.empty(sliced.shape + (2,), dtype=np.int8)
    bits[..., 0] = sliced.real < 0
    bits[..., 1] = sliced.imag < 0
    return bits
