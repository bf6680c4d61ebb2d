from __future__ import annotations

import numpy as np
import numpy.typing as npt

from ..core import qpsk_demap
from ..errors import ShapeMismatchError


def count_bit_errors(
    decided: npt.ArrayLike,
    truth: npt.ArrayLike,
    mask: npt.ArrayLike | None = None,
) -> tuple[int, int]:
    """Gray-mapped bit errors and compared bits over the positions selected by ``mask``.

    Pass the frame's data mask so that pilot positions are left out.
    """
    decided_symbols = np.asarray(decided, dtype=np.complex128)
    true_symbols = np.asarray(truth, dtype=np.complex128)
    if decided_symbols.shape != true_symbols.shape:
        raise ShapeMismatchError(
            f"decisions of shape {decided_symbols.shape} do not match {true_symbols.shape}"
        )
    selected = (
        np.ones(decided_symbols.shape, dtype=bool)
        if mask is None
        else np.asarray(mask, dtype=bool)
    )
    if selected.shape != decided_symbols.shape:
        raise ShapeMismatchError(
            f"mask of shape {selected.shape} does not match {decided_symbols.shape}"
        )
    errors = qpsk_demap(decided_symbols[selected]) != qpsk_demap(true_symbols[selected])
    return int(errors.sum()), int(errors.size)
