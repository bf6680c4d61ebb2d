"""Typed simulation settings built from an effective configuration mapping."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from ..channel.model import ChannelSpec, FadingModel
from ..errors import ConfigError, SimError
from ..estimators.basis import BasisKind
from ..estimators.observation import EstimatorKind
from ..waveforms.params import System, WaveformParams

AUTO_SEED = "auto"


@dataclass(frozen=True, slots=True)
class SimConfig:
    waveform: WaveformParams
    channel: ChannelSpec
    estimators: tuple[EstimatorKind, ...]
    basis: BasisKind
    basis_functions: int
    ic_iterations: int
    ebn0_db: tuple[float, ...]
    trials: int
    seed: int
    workers: int = 1
    max_bit_errors: int = 200
    batch_size: int = 50
    output_path: Path | None = None
    output_format: str = "csv"

    @property
    def system(self) -> System:
        return self.waveform.system

    @classmethod
    def from_mapping(cls, config: Mapping[str, Any]) -> SimConfig:
        """Build settings from the effective config; every structural problem is a ConfigError."""
        try:
            waveform_section = config["waveform"]
            channel_section = config["channel"]
            estimation = config["estimation"]
            sweep = config["sweep"]
            output = config.get("output", {})

            waveform = WaveformParams(
                system=System(str(config["system"]).lower()),
                subcarriers=_positive_int(waveform_section["subcarriers"], "waveform.subcarriers"),
                subsymbols=_positive_int(waveform_section["subsymbols"], "waveform.subsymbols"),
                pilot_spacing=_positive_int(waveform_section["pilot_spacing"], "waveform.pilot_spacing"),
                cp_length=_non_negative_int(waveform_section["cp_length"], "waveform.cp_length"),
                rolloff=float(waveform_section["rolloff"]),
                overlap=_positive_int(waveform_section["overlap"], "waveform.overlap"),
            )
            channel = ChannelSpec(
                delays=tuple(float(value) for value in _as_list(channel_section["delays"])),
                powers=tuple(float(value) for value in _as_list(channel_section["powers"])),
                cp_length=waveform.cp_length,
                model=FadingModel(str(channel_section["model"]).lower()),
            )
            estimators = tuple(
                dict.fromkeys(EstimatorKind.parse(str(name)) for name in _as_list(estimation["estimators"]))
            )
            basis_functions = _positive_int(estimation["basis_functions"], "estimation.basis_functions")
            if any(kind.is_bem for kind in estimators) and basis_functions > waveform.n_pilots:
                raise ConfigError(
                    f"estimation.basis_functions={basis_functions} exceeds the {waveform.n_pilots} pilots",
                    hint="use at most as many basis functions as pilots",
                )
            return cls(
                waveform=waveform,
                channel=channel,
                estimators=estimators,
                basis=BasisKind(str(estimation["basis"]).lower()),
                basis_functions=basis_functions,
                ic_iterations=_non_negative_int(config["detection"]["ic_iterations"], "detection.ic_iterations"),
                ebn0_db=parse_ebn0_grid(sweep["ebn0_db"]),
                trials=_positive_int(sweep["trials"], "sweep.trials"),
                seed=resolve_seed(sweep.get("seed")),
                workers=_positive_int(sweep.get("workers", 1), "sweep.workers"),
                max_bit_errors=_positive_int(sweep.get("max_bit_errors", 200), "sweep.max_bit_errors"),
                batch_size=_positive_int(sweep.get("batch_size", 50), "sweep.batch_size"),
                output_path=Path(output["path"]) if output.get("path") else None,
                output_format=str(output.get("format", "csv")).lower(),
            )
        except ConfigError:
            raise
        except SimError as exc:
            raise ConfigError(exc.message, hint=exc.hint) from exc
        except KeyError as exc:
            raise ConfigError(f"missing config key: {exc.args[0]}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc

    def to_dict(self) -> dict[str, Any]:
        """Plain, JSON-ready echo of the settings used for a sweep."""
        waveform = self.waveform
        return {
            "system": waveform.system.value,
            "waveform": {
                "subcarriers": waveform.subcarriers,
                "subsymbols": waveform.subsymbols,
                "pilot_spacing": waveform.pilot_spacing,
                "cp_length": waveform.cp_length,
                "rolloff": waveform.rolloff,
                "overlap": waveform.overlap,
            },
            "channel": {
                "model": self.channel.model.value,
                "delays": list(self.channel.delays),
                "powers": list(self.channel.powers),
            },
            "estimation": {
                "estimators": [kind.label for kind in self.estimators],
                "basis": self.basis.value,
                "basis_functions": self.basis_functions,
            },
            "detection": {"ic_iterations": self.ic_iterations},
            "sweep": {
                "ebn0_db": list(self.ebn0_db),
                "trials": self.trials,
                "seed": self.seed,
                "max_bit_errors": self.max_bit_errors,
                "batch_size": self.batch_size,
            },
        }


def parse_ebn0_grid(value: Any) -> tuple[float, ...]:
    """Accept ``start:step:stop`` (stop included), a comma list, a number or a sequence."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (float(value),)
    if isinstance(value, (list, tuple)):
        grid = tuple(float(item) for item in value)
    else:
        text = str(value).strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError(
                    f"invalid Eb/N0 range: {text}", hint="use start:step:stop, e.g. 0:5:30"
                )
            start, step, stop = (float(part) for part in parts)
            if step <= 0 or stop < start:
                raise ConfigError(f"invalid Eb/N0 range: {text}", hint="step must be positive")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            grid = tuple(float(start + index * step) for index in range(count))
        else:
            grid = tuple(float(item) for item in text.split(",") if item.strip())
    if not grid:
        raise ConfigError("Eb/N0 grid must not be empty")
    return grid


def resolve_seed(value: Any) -> int:
    if value is None or (isinstance(value, str) and not value.strip()):
        raise ConfigError(
            "a master seed is required for reproducible sweeps",
            hint="pass --seed N, or --seed auto to draw one",
        )
    if isinstance(value, str) and value.strip().lower() == AUTO_SEED:
        return int(np.random.SeedSequence().entropy)
    try:
        seed = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid seed: {value}", hint="use a non-negative integer or auto") from exc
    if seed < 0:
        raise ConfigError(f"seed must be non-negative, got {seed}")
    return seed


def _as_list(value: Any) -> list[Any]:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _positive_int(value: Any, name: str) -> int:
    number = _as_int(value, name)
    if number < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value}")
    return number


def _non_negative_int(value: Any, name: str) -> int:
    number = _as_int(value, name)
    if number < 0:
        raise ConfigError(f"{name} must be non-negative, got {value}")
    return number


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer, got {value}")
    try:
        number = int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be an integer, got {value}") from exc
    if number != float(value):
        raise ConfigError(f"{name} must be an integer, got {value}")
    return number
