"""CLI entry point for the mcce simulator."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import typer

from . import logging as log
from .config import ConfigBundle, load_config
from .errors import ConfigError, ReportIOError, SimError
from .estimators.observation import EstimatorKind
from .harness.gaps import ber_gaps
from .harness.settings import AUTO_SEED, SimConfig
from .harness.sweep import SweepReport, run_ber_sweep, run_mse_sweep
from .report import emit_report, load_report, render_csv, render_json

app = typer.Typer(
    help="Link-level OFDM/GFDM simulator comparing pilot-aided channel estimators.",
    no_args_is_help=True,
    add_completion=False,
)

EXIT_CODES: dict[type[SimError], int] = {ConfigError: 2, ReportIOError: 3}


def _command_context(config_path: Path, overrides: dict[str, Any] | None = None) -> ConfigBundle:
    bundle = load_config(config_path=config_path, overrides=overrides)
    for message in bundle.warnings:
        log.warning(message, err=_report_on_stdout(bundle))
    return bundle


def _report_on_stdout(bundle: ConfigBundle) -> bool:
    # stdout carries only the report
    return not bundle.effective_config["output"].get("path")


def _sweep_overrides(
    *,
    system: str | None,
    subcarriers: int | None,
    subsymbols: int | None,
    pilot_spacing: int | None,
    cp_length: int | None,
    rolloff: float | None,
    overlap: int | None,
    channel_model: str | None,
    delays: str | None,
    powers: str | None,
    basis_functions: int | None,
    basis: str | None,
    estimators: str | None,
    ebn0: str | None,
    trials: int | None,
    seed: str | None,
    workers: int | None,
    out: Path | None,
    fmt: str | None,
    ic_iterations: int | None = None,
    max_errors: int | None = None,
    batch_size: int | None = None,
) -> dict[str, Any]:
    if fmt is None and out is not None and out.suffix.lower() == ".json":
        fmt = "json"
    return {
        "system": system,
        "waveform": {
            "subcarriers": subcarriers,
            "subsymbols": subsymbols,
            "pilot_spacing": pilot_spacing,
            "cp_length": cp_length,
            "rolloff": rolloff,
            "overlap": overlap,
        },
        "channel": {"model": channel_model, "delays": delays, "powers": powers},
        "estimation": {
            "estimators": [item.strip() for item in estimators.split(",") if item.strip()]
            if estimators
            else None,
            "basis": basis,
            "basis_functions": basis_functions,
        },
        "detection": {"ic_iterations": ic_iterations},
        "sweep": {
            "ebn0_db": ebn0,
            "trials": trials,
            "seed": seed,
            "workers": workers,
            "max_bit_errors": max_errors,
            "batch_size": batch_size,
        },
        "output": {"path": str(out) if out else None, "format": fmt},
    }


def _run_sweep(kind: str, config_path: Path, overrides: dict[str, Any]) -> SweepReport:
    bundle = _command_context(config_path, overrides)
    quiet = _report_on_stdout(bundle)
    settings = SimConfig.from_mapping(bundle.effective_config)
    if str(bundle.effective_config["sweep"].get("seed")).lower() == AUTO_SEED:
        log.info(f"drew master seed {settings.seed}", err=quiet)
    log.info(
        f"{kind} sweep: {settings.system.value}, {len(settings.ebn0_db)} Eb/N0 point(s), "
        f"{settings.trials} trial(s), {settings.workers} worker(s)",
        err=quiet,
    )

    report = run_mse_sweep(settings) if kind == "mse" else run_ber_sweep(settings)
    for message in report.warnings:
        log.warning(message, err=quiet)

    if settings.output_path is None:
        rendered = render_json(report) if settings.output_format == "json" else render_csv(report)
        typer.echo(rendered, nl=False)
    else:
        path = emit_report(report, settings.output_format, settings.output_path)
        log.success(f"{kind} report written to {path}")
    return report


@app.command("mse")
def mse_command(
    system: str | None = typer.Option(None, "--system", help="System: ofdm/gfdm."),
    subcarriers: int | None = typer.Option(None, "--k", help="Number of subcarriers K."),
    subsymbols: int | None = typer.Option(None, "--m", help="Subsymbols per GFDM block, or OFDM symbols per frame."),
    pilot_spacing: int | None = typer.Option(None, "--ps", help="Pilot subcarrier spacing."),
    cp_length: int | None = typer.Option(None, "--cp", help="Cyclic prefix length in samples."),
    rolloff: float | None = typer.Option(None, "--alpha", help="RRC roll-off factor."),
    overlap: int | None = typer.Option(None, "--overlap", help="GFDM prototype overlap factor: subcarrier bands per filter."),
    channel_model: str | None = typer.Option(None, "--channel-model", help="Channel model: rayleigh/static."),
    delays: str | None = typer.Option(None, "--delays", help="Comma-separated tap delays in samples."),
    powers: str | None = typer.Option(None, "--powers", help="Comma-separated tap powers, normalized to unit sum."),
    basis_functions: int | None = typer.Option(None, "--na", help="Number of BEM basis functions."),
    basis: str | None = typer.Option(None, "--basis", help="BEM basis: ce/lp."),
    estimators: str | None = typer.Option(None, "--estimators", help="Comma-separated estimators, e.g. ls,ls-bem,almmse-bem."),
    ebn0: str | None = typer.Option(None, "--ebn0", help="Eb/N0 grid in dB: start:step:stop or a comma list."),
    trials: int | None = typer.Option(None, "--trials", help="Trials per Eb/N0 point."),
    seed: str | None = typer.Option(None, "--seed", help="Master seed, or auto."),
    workers: int | None = typer.Option(None, "--workers", help="Worker threads."),
    out: Path | None = typer.Option(None, "--out", help="Report path; stdout when omitted."),
    fmt: str | None = typer.Option(None, "--format", help="Report format: csv/json."),
    config: Path = typer.Option(Path("config.yaml"), "--config", help="Path to config YAML or JSON."),
) -> None:
    overrides = _sweep_overrides(
        system=system,
        subcarriers=subcarriers,
        subsymbols=subsymbols,
        pilot_spacing=pilot_spacing,
        cp_length=cp_length,
        rolloff=rolloff,
        overlap=overlap,
        channel_model=channel_model,
        delays=delays,
        powers=powers,
        basis_functions=basis_functions,
        basis=basis,
        estimators=estimators,
        ebn0=ebn0,
        trials=trials,
        seed=seed,
        workers=workers,
        out=out,
        fmt=fmt,
    )
    _run_sweep("mse", config, overrides)


@app.command("ber")
def ber_command(
    system: str | None = typer.Option(None, "--system", help="System: ofdm/gfdm."),
    subcarriers: int | None = typer.Option(None, "--k", help="Number of subcarriers K."),
    subsymbols: int | None = typer.Option(None, "--m", help="Subsymbols per GFDM block, or OFDM symbols per frame."),
    pilot_spacing: int | None = typer.Option(None, "--ps", help="Pilot subcarrier spacing."),
    cp_length: int | None = typer.Option(None, "--cp", help="Cyclic prefix length in samples."),
    rolloff: float | None = typer.Option(None, "--alpha", help="RRC roll-off factor."),
    overlap: int | None = typer.Option(None, "--overlap", help="GFDM prototype overlap factor: subcarrier bands per filter."),
    channel_model: str | None = typer.Option(None, "--channel-model", help="Channel model: rayleigh/static."),
    delays: str | None = typer.Option(None, "--delays", help="Comma-separated tap delays in samples."),
    powers: str | None = typer.Option(None, "--powers", help="Comma-separated tap powers, normalized to unit sum."),
    basis_functions: int | None = typer.Option(None, "--na", help="Number of BEM basis functions."),
    basis: str | None = typer.Option(None, "--basis", help="BEM basis: ce/lp."),
    estimators: str | None = typer.Option(None, "--estimators", help="Comma-separated estimators; perfect CSI is always added."),
    ebn0: str | None = typer.Option(None, "--ebn0", help="Eb/N0 grid in dB: start:step:stop or a comma list."),
    trials: int | None = typer.Option(None, "--trials", help="Trial cap per Eb/N0 point."),
    seed: str | None = typer.Option(None, "--seed", help="Master seed, or auto."),
    workers: int | None = typer.Option(None, "--workers", help="Worker threads."),
    ic_iterations: int | None = typer.Option(None, "--ic-iterations", help="GFDM interference-cancellation sweeps J."),
    max_errors: int | None = typer.Option(None, "--max-errors", help="Bit errors after which a cell stops."),
    batch_size: int | None = typer.Option(None, "--batch-size", help="Trials between early-stopping checks."),
    out: Path | None = typer.Option(None, "--out", help="Report path; stdout when omitted."),
    fmt: str | None = typer.Option(None, "--format", help="Report format: csv/json."),
    config: Path = typer.Option(Path("config.yaml"), "--config", help="Path to config YAML or JSON."),
) -> None:
    overrides = _sweep_overrides(
        system=system,
        subcarriers=subcarriers,
        subsymbols=subsymbols,
        pilot_spacing=pilot_spacing,
        cp_length=cp_length,
        rolloff=rolloff,
        overlap=overlap,
        channel_model=channel_model,
        delays=delays,
        powers=powers,
        basis_functions=basis_functions,
        basis=basis,
        estimators=estimators,
        ebn0=ebn0,
        trials=trials,
        seed=seed,
        workers=workers,
        out=out,
        fmt=fmt,
        ic_iterations=ic_iterations,
        max_errors=max_errors,
        batch_size=batch_size,
    )
    _run_sweep("ber", config, overrides)


@app.command("gaps")
def gaps_command(
    report: Path,
    target_ber: float = typer.Option(1e-3, "--target-ber", help="BER at which curves are compared."),
    reference: str = typer.Option("almmse-bem", "--reference", help="Estimator the gaps are measured against."),
) -> None:
    loaded = load_report(report)
    reference_label = EstimatorKind.parse(reference).label
    gaps = ber_gaps(loaded, target=target_ber, reference=reference_label)
    log.bullet_list(
        f"horizontal gaps to {reference_label} at BER {target_ber:g}",
        (
            f"{estimator}: target not reached" if gap is None else f"{estimator}: {gap:+.2f} dB"
            for estimator, gap in gaps.items()
        ),
    )


def main() -> int:
    try:
        app()
    except SimError as exc:
        log.render_sim_error(exc)
        return EXIT_CODES.get(type(exc), 1)
    return 0
