"""Report helpers for stable machine-readable sweep outputs."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict
from pathlib import Path
from typing import Any

from .errors import ConfigError, ReportIOError
from .harness.sweep import SweepCell, SweepReport

SCHEMA_VERSION = "1.0"
REPORT_FORMATS = ("csv", "json")
CSV_COLUMNS = (
    "system",
    "estimator",
    "basis",
    "ebn0_db",
    "mse_db",
    "ber",
    "trials",
    "ci_halfwidth",
    "seed",
    "mse_full_db",
)


def render_csv(report: SweepReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for cell in report.cells:
        values = asdict(cell)
        writer.writerow([_csv_value(values[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def render_json(report: SweepReport) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "code_version": report.code_version,
        "kind": report.kind,
        "seed": report.seed,
        "config": report.config,
        "cells": [asdict(cell) for cell in report.cells],
        "warnings": list(report.warnings),
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def emit_report(report: SweepReport, fmt: str, path: str | Path) -> Path:
    """Atomically write a report as CSV or JSON."""
    normalized = fmt.lower()
    if normalized not in REPORT_FORMATS:
        raise ConfigError(
            f"invalid report format: {fmt}", hint=f"allowed values: {', '.join(REPORT_FORMATS)}"
        )
    payload = render_csv(report) if normalized == "csv" else render_json(report)
    return _write_atomic(Path(path), payload)


def load_report(path: str | Path) -> SweepReport:
    """Read a JSON report written by :func:`emit_report`."""
    report_path = Path(path)
    try:
        with report_path.open("r", encoding="utf-8") as handle:
            loaded = json.load(handle)
    except OSError as exc:
        raise ReportIOError(f"failed to read report: {report_path}", hint=str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"failed to parse report file: {report_path}", hint=str(exc)) from exc

    if not isinstance(loaded, dict) or not isinstance(loaded.get("cells"), list):
        raise ConfigError(f"report file must contain a JSON object with cells: {report_path}")
    if loaded.get("schema_version") != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported report schema {loaded.get('schema_version')!r}: {report_path}",
            hint=f"expected schema_version {SCHEMA_VERSION}",
        )

    try:
        cells = tuple(SweepCell(**cell) for cell in loaded["cells"])
    except TypeError as exc:
        raise ConfigError(f"malformed report cell in {report_path}", hint=str(exc)) from exc
    return SweepReport(
        kind=str(loaded.get("kind", "")),
        seed=int(loaded.get("seed", 0)),
        config=dict(loaded.get("config") or {}),
        cells=cells,
        warnings=tuple(loaded.get("warnings") or ()),
        code_version=str(loaded.get("code_version", "")),
    )


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_atomic(path: Path, payload: str) -> Path:
    temp_path: Path | None = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w",
            encoding="utf-8",
            newline="",
            dir=path.parent,
            prefix=f".{path.stem}.",
            suffix=".tmp",
            delete=False,
        ) as handle:
            handle.write(payload)
            temp_path = Path(handle.name)

        os.replace(temp_path, path)
    except OSError as exc:
        raise ReportIOError(f"failed to write report: {path}", hint=str(exc)) from exc
    finally:
        if temp_path is not None and temp_path.exists():
            temp_path.unlink(missing_ok=True)

    return path
