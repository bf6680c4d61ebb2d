"""Horizontal (Eb/N0) gaps between BER curves at a target error rate."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..errors import ConfigError
from .sweep import SweepReport

# zero error counts are floored here before taking logs
BER_FLOOR = 1e-12


def ber_crossing(ebn0_db: Sequence[float], ber: Sequence[float], target: float) -> float | None:
    """Eb/N0 at which the curve first falls to ``target``, interpolated linearly in log10(BER).

    Returns ``None`` when the curve never reaches the target inside the grid.
    """
    if not 0 < target < 1:
        raise ConfigError(f"target BER must lie in (0, 1), got {target}")
    points = np.asarray(ebn0_db, dtype=np.float64)
    if points.size != len(ber):
        raise ConfigError("Eb/N0 grid and BER series differ in length")
    if points.size == 0:
        return None
    logs = np.log10(np.maximum(np.asarray(ber, dtype=np.float64), BER_FLOOR))
    goal = np.log10(target)
    if logs[0] <= goal:
        return float(points[0]) if logs[0] == goal else None
    for index in range(1, points.size):
        if logs[index] <= goal:
            fraction = (logs[index - 1] - goal) / (logs[index - 1] - logs[index])
            return float(points[index - 1] + fraction * (points[index] - points[index - 1]))
    return None


def horizontal_gap_db(
    ebn0_db: Sequence[float],
    reference_ber: Sequence[float],
    other_ber: Sequence[float],
    target: float = 1e-3,
) -> float | None:
    """Extra Eb/N0 the other curve needs to reach ``target``; positive means it is worse."""
    reference = ber_crossing(ebn0_db, reference_ber, target)
    other = ber_crossing(ebn0_db, other_ber, target)
    if reference is None or other is None:
        return None
    return other - reference


def ber_gaps(
    report: SweepReport,
    *,
    target: float = 1e-3,
    reference: str = "almmse-bem",
) -> dict[str, float | None]:
    """Gap of every estimator in a BER report against ``reference``."""
    if report.kind != "ber":
        raise ConfigError(f"gap analysis needs a BER report, got a {report.kind} report")
    if reference not in report.estimators():
        raise ConfigError(
            f"reference estimator {reference} is not in the report",
            hint=f"available: {', '.join(report.estimators())}",
        )
    base = report.series(reference)
    grid = [cell.ebn0_db for cell in base]
    base_ber = [cell.ber or 0.0 for cell in base]

    gaps: dict[str, float | None] = {}
    for estimator in report.estimators():
        if estimator == reference:
            continue
        series = report.series(estimator)
        if [cell.ebn0_db for cell in series] != grid:
            raise ConfigError(f"{estimator} was swept on a different Eb/N0 grid")
        gaps[estimator] = horizontal_gap_db(
            grid, base_ber, [cell.ber or 0.0 for cell in series], target
        )
    return gaps
