"""Monte Carlo MSE and BER sweeps over an Eb/N0 grid.

Trials run on a thread pool but results are consumed in trial order and reduced in a
fixed order, so a report is bit-identical for any worker count. BER cells advance in
batches of ``batch_size`` trials and stop at the first batch boundary where
``max_bit_errors`` is reached, or at the trial cap.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, TypeVar

import numpy as np

from .. import __version__
from ..estimators.observation import EstimatorKind
from .noise import noise_variances
from .settings import SimConfig
from .trials import MSE_FLOOR, Link, TrialOutcome

Z_95 = 1.959963984540054
REPORT_KINDS = ("mse", "ber")

T = TypeVar("T")
Mapper = Callable[[Callable[[int], T], Iterable[int]], Iterator[T]]


@dataclass(frozen=True, slots=True)
class SweepCell:
    system: str
    estimator: str
    basis: str
    ebn0_db: float
    trials: int
    seed: int
    mse_db: float | None = None
    ber: float | None = None
    ci_halfwidth: float = 0.0
    mse_full_db: float | None = None
    bit_errors: int | None = None
    bits: int | None = None


@dataclass(frozen=True, slots=True)
class SweepReport:
    kind: str
    seed: int
    config: dict[str, Any]
    cells: tuple[SweepCell, ...]
    warnings: tuple[str, ...] = ()
    code_version: str = field(default=__version__)

    def estimators(self) -> list[str]:
        return list(dict.fromkeys(cell.estimator for cell in self.cells))

    def series(self, estimator: str) -> list[SweepCell]:
        """Cells of one estimator in Eb/N0 order."""
        return sorted(
            (cell for cell in self.cells if cell.estimator == estimator),
            key=lambda cell: cell.ebn0_db,
        )

    def cell(self, estimator: str, ebn0_db: float) -> SweepCell:
        for candidate in self.cells:
            if candidate.estimator == estimator and candidate.ebn0_db == ebn0_db:
                return candidate
        raise KeyError((estimator, ebn0_db))


def run_mse_sweep(config: SimConfig) -> SweepReport:
    link = Link(config)
    kinds = tuple(kind for kind in config.estimators if kind is not EstimatorKind.PERFECT)
    warnings: list[str] = []
    if len(kinds) != len(config.estimators):
        warnings.append("perfect CSI has no estimation error and is left out of MSE sweeps")
    variances = noise_variances(config.ebn0_db, config.waveform)

    with _trial_mapper(config.workers) as mapper:
        outcomes = list(mapper(lambda trial: link.mse_trial(trial, variances, kinds), range(config.trials)))

    samples = np.stack([outcome.values for outcome in outcomes]) if outcomes else np.zeros((0,))
    notes = _merge_warnings(outcomes)

    cells: list[SweepCell] = []
    for column, kind in enumerate(kinds):
        for point, ebn0 in enumerate(config.ebn0_db):
            pilot = samples[:, point, column, 0]
            full = samples[:, point, column, 1]
            mean = float(pilot.mean())
            cells.append(
                SweepCell(
                    system=config.system.value,
                    estimator=kind.label,
                    basis=config.basis.value if kind.is_bem else "",
                    ebn0_db=float(ebn0),
                    trials=config.trials,
                    seed=config.seed,
                    mse_db=_to_db(mean),
                    ci_halfwidth=_db_halfwidth(pilot, mean),
                    mse_full_db=_to_db(float(full.mean())),
                )
            )

    return SweepReport(
        kind="mse",
        seed=config.seed,
        config=config.to_dict(),
        cells=tuple(cells),
        warnings=tuple(warnings) + notes,
    )


def run_ber_sweep(config: SimConfig) -> SweepReport:
    link = Link(config)
    kinds = (EstimatorKind.PERFECT,) + tuple(
        kind for kind in config.estimators if kind is not EstimatorKind.PERFECT
    )
    variances = noise_variances(config.ebn0_db, config.waveform)
    cap = config.trials

    cells: list[SweepCell] = []
    warnings: list[str] = []
    notes: set[str] = set()
    with _trial_mapper(config.workers) as mapper:
        for ebn0, noise_variance in zip(config.ebn0_db, variances):
            counts = np.zeros((len(kinds), 2), dtype=np.int64)
            used = np.zeros(len(kinds), dtype=np.int64)
            active = list(range(len(kinds)))
            start = 0
            while active and start < cap:
                stop = min(start + config.batch_size, cap)
                batch_kinds = tuple(kinds[index] for index in active)
                outcomes = list(
                    mapper(
                        lambda trial: link.ber_trial(trial, float(noise_variance), batch_kinds),
                        range(start, stop),
                    )
                )
                notes.update(*(outcome.warnings for outcome in outcomes))
                batch = np.sum([outcome.values for outcome in outcomes], axis=0).astype(np.int64)
                counts[active] += batch
                used[active] += stop - start
                active = [index for index in active if counts[index, 0] < config.max_bit_errors]
                start = stop

            for index, kind in enumerate(kinds):
                errors, bits = int(counts[index, 0]), int(counts[index, 1])
                if errors < config.max_bit_errors:
                    warnings.append(
                        f"{kind.label} at {ebn0:g} dB reached the trial cap with {errors} bit errors"
                    )
                ber = errors / bits if bits else 0.0
                cells.append(
                    SweepCell(
                        system=config.system.value,
                        estimator=kind.label,
                        basis=config.basis.value if kind.is_bem else "",
                        ebn0_db=float(ebn0),
                        trials=int(used[index]),
                        seed=config.seed,
                        ber=ber,
                        ci_halfwidth=Z_95 * float(np.sqrt(ber * (1.0 - ber) / bits)) if bits else 0.0,
                        bit_errors=errors,
                        bits=bits,
                    )
                )

    cells.sort(key=lambda cell: kinds.index(EstimatorKind.parse(cell.estimator)))
    return SweepReport(
        kind="ber",
        seed=config.seed,
        config=config.to_dict(),
        cells=tuple(cells),
        warnings=tuple(warnings) + tuple(sorted(notes)),
    )


@contextmanager
def _trial_mapper(workers: int) -> Iterator[Mapper]:
    """``map`` for one worker, an ordered thread-pool ``map`` otherwise."""
    if workers <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="mcce-trial") as pool:
        yield pool.map


def _merge_warnings(outcomes: list[TrialOutcome]) -> tuple[str, ...]:
    merged: set[str] = set()
    for outcome in outcomes:
        merged.update(outcome.warnings)
    return tuple(sorted(merged))


def _to_db(value: float) -> float:
    return float(10.0 * np.log10(max(value, MSE_FLOOR)))


def _db_halfwidth(samples: np.ndarray, mean: float) -> float:
    """95% normal-approximation half-width of the mean, carried to dB around it."""
    if samples.size < 2 or mean <= 0:
        return 0.0
    halfwidth = Z_95 * float(samples.std(ddof=1)) / np.sqrt(samples.size)
    return float(10.0 / np.log(10.0) * halfwidth / mean)
