"""Configuration loading and schema utilities."""

from __future__ import annotations

import os
from copy import deepcopy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml
from dotenv import dotenv_values

from .errors import ConfigError

DEFAULT_CONFIG: dict[str, Any] = {
    "system": "gfdm",
    "waveform": {
        "subcarriers": 128,
        "subsymbols": 5,
        "pilot_spacing": 4,
        "cp_length": 8,
        "rolloff": 0.5,
        "overlap": 2,
    },
    "channel": {
        "model": "rayleigh",
        "delays": [0.0, 2.7, 3.1, 4.9],
        "powers": [1.0, 0.5, 0.25, 0.125],
    },
    "estimation": {
        "estimators": ["ls", "lmmse", "ls-bem", "lmmse-bem", "almmse-bem"],
        "basis": "ce",
        "basis_functions": 18,
    },
    "detection": {
        "ic_iterations": 2,
    },
    "sweep": {
        "ebn0_db": "0:5:30",
        "trials": 2000,
        "seed": None,
        "workers": 1,
        "max_bit_errors": 200,
        "batch_size": 50,
    },
    "output": {
        "path": None,
        "format": "csv",
    },
}

ENV_MAPPING: dict[str, tuple[str, ...]] = {
    "SIM_SYSTEM": ("system",),
    "SIM_SUBCARRIERS": ("waveform", "subcarriers"),
    "SIM_SUBSYMBOLS": ("waveform", "subsymbols"),
    "SIM_PILOT_SPACING": ("waveform", "pilot_spacing"),
    "SIM_CP_LENGTH": ("waveform", "cp_length"),
    "SIM_ROLLOFF": ("waveform", "rolloff"),
    "SIM_OVERLAP": ("waveform", "overlap"),
    "SIM_CHANNEL_MODEL": ("channel", "model"),
    "SIM_CHANNEL_DELAYS": ("channel", "delays"),
    "SIM_CHANNEL_POWERS": ("channel", "powers"),
    "SIM_ESTIMATORS": ("estimation", "estimators"),
    "SIM_BASIS": ("estimation", "basis"),
    "SIM_BASIS_FUNCTIONS": ("estimation", "basis_functions"),
    "SIM_IC_ITERATIONS": ("detection", "ic_iterations"),
    "SIM_EBN0_DB": ("sweep", "ebn0_db"),
    "SIM_TRIALS": ("sweep", "trials"),
    "SIM_SEED": ("sweep", "seed"),
    "SIM_WORKERS": ("sweep", "workers"),
    "SIM_MAX_BIT_ERRORS": ("sweep", "max_bit_errors"),
    "SIM_BATCH_SIZE": ("sweep", "batch_size"),
    "SIM_OUTPUT_PATH": ("output", "path"),
    "SIM_OUTPUT_FORMAT": ("output", "format"),
}

ENUM_CONSTRAINTS: dict[tuple[str, ...], set[str]] = {
    ("system",): {"ofdm", "gfdm"},
    ("channel", "model"): {"rayleigh", "static"},
    ("estimation", "basis"): {"ce", "lp"},
    ("output", "format"): {"csv", "json"},
}

SECTIONS = ("waveform", "channel", "estimation", "detection", "sweep", "output")


@dataclass(slots=True)
class ConfigBundle:
    """Container for raw and effective configuration state."""

    source_path: Path | None
    raw_config: dict[str, Any] = field(default_factory=dict)
    env_config: dict[str, Any] = field(default_factory=dict)
    effective_config: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def load_config(
    config_path: str | Path = "config.yaml",
    overrides: dict[str, Any] | None = None,
) -> ConfigBundle:
    """Load configuration from defaults, YAML or JSON, dotenv/environment, and CLI overrides."""
    path = Path(config_path)
    warnings: list[str] = []
    file_config = _load_yaml_config(path)
    _drop_unknown_keys(file_config, warnings)

    env_values = _load_env_values(path.parent if path.parent != Path("") else Path.cwd())
    env_config = _build_env_config(env_values)

    effective = deepcopy(DEFAULT_CONFIG)
    _deep_merge(effective, file_config)
    _deep_merge(effective, env_config)

    cli_overrides = overrides or {}
    _deep_merge(effective, _prune_nones(cli_overrides))

    _validate_config(effective)

    return ConfigBundle(
        source_path=path if path.exists() else None,
        raw_config=file_config,
        env_config=env_config,
        effective_config=effective,
        warnings=warnings,
    )


def _load_yaml_config(path: Path) -> dict[str, Any]:
    if not path.exists():
        return {}

    try:
        with path.open("r", encoding="utf-8") as handle:
            loaded = yaml.safe_load(handle) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"failed to parse config file: {path}", hint=str(exc)) from exc

    if not isinstance(loaded, dict):
        raise ConfigError(f"config file must contain a mapping: {path}")

    return loaded


def _drop_unknown_keys(config: dict[str, Any], warnings: list[str]) -> None:
    for key in list(config):
        if key not in DEFAULT_CONFIG:
            config.pop(key)
            warnings.append(f"unknown config key '{key}' ignored")
    for section in SECTIONS:
        values = config.get(section)
        if values is None:
            continue
        if not isinstance(values, dict):
            raise ConfigError(f"{section} must be a mapping when present")
        for key in list(values):
            if key not in DEFAULT_CONFIG[section]:
                values.pop(key)
                warnings.append(f"unknown config key '{section}.{key}' ignored")


def _load_env_values(base_dir: Path) -> dict[str, str]:
    dotenv_path = base_dir / ".env"
    values: dict[str, str] = {}
    if dotenv_path.exists():
        values.update({k: v for k, v in dotenv_values(dotenv_path).items() if v is not None})

    for key in ENV_MAPPING:
        value = os.getenv(key)
        if value is not None:
            values[key] = value

    return values


def _build_env_config(env_values: dict[str, str]) -> dict[str, Any]:
    env_config: dict[str, Any] = {}
    for env_key, path_parts in ENV_MAPPING.items():
        if env_key in env_values:
            template = _get_nested(DEFAULT_CONFIG, path_parts)
            value = _convert_env_value(env_key, env_values[env_key], template)
            _set_nested(env_config, path_parts, value)
    return env_config


def _convert_env_value(env_key: str, raw_value: str, template: Any) -> Any:
    text = raw_value.strip()
    if text.lower() in {"null", "none", ""}:
        return None
    if isinstance(template, list):
        items = [item.strip() for item in text.split(",") if item.strip()]
        if template and isinstance(template[0], float):
            return [_parse_number(env_key, item, float) for item in items]
        return items
    if isinstance(template, (int, float)):
        return _parse_number(env_key, text, type(template))
    return text


def _parse_number(env_key: str, text: str, kind: type) -> Any:
    try:
        return kind(text)
    except ValueError as exc:
        label = "integer" if kind is int else "float"
        raise ConfigError(f"invalid {label} value for {env_key}: {text}") from exc


def _set_nested(target: dict[str, Any], path_parts: tuple[str, ...], value: Any) -> None:
    current = target
    for part in path_parts[:-1]:
        current = current.setdefault(part, {})
    current[path_parts[-1]] = value


def _deep_merge(base: dict[str, Any], override: dict[str, Any]) -> None:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value


def _prune_nones(value: Any) -> Any:
    if isinstance(value, dict):
        return {
            key: _prune_nones(item)
            for key, item in value.items()
            if item is not None and _prune_nones(item) is not None
        }
    return value


def _validate_config(config: dict[str, Any]) -> None:
    for section in SECTIONS:
        if not isinstance(config.get(section), dict):
            raise ConfigError(f"{section} must be a mapping")

    for path_parts, allowed_values in ENUM_CONSTRAINTS.items():
        value = _get_nested(config, path_parts)
        normalized = value.lower() if isinstance(value, str) else value
        if normalized not in allowed_values:
            joined = ".".join(path_parts)
            allowed = ", ".join(sorted(allowed_values))
            raise ConfigError(f"invalid value for {joined}: {value}", hint=f"allowed values: {allowed}")
        _set_nested(config, path_parts, normalized)


def _get_nested(source: dict[str, Any], path_parts: tuple[str, ...]) -> Any:
    current: Any = source
    for part in path_parts:
        if not isinstance(current, dict) or part not in current:
            raise ConfigError(f"missing config key: {'.'.join(path_parts)}")
        current = current[part]
    return current
