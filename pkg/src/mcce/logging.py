"""Small logging helpers for consistent CLI messaging."""

from __future__ import annotations

from typing import Iterable

import typer

from .errors import SimError


def info(message: str, *, err: bool = False) -> None:
    typer.echo(f"[INFO] {message}", err=err)


def success(message: str, *, err: bool = False) -> None:
    typer.secho(f"[OK] {message}", fg=typer.colors.GREEN, err=err)


def warning(message: str, *, err: bool = False) -> None:
    typer.secho(f"[WARN] {message}", fg=typer.colors.YELLOW, err=err)


def error(message: str) -> None:
    typer.secho(f"[ERROR] {message}", fg=typer.colors.RED, err=True)


def bullet_list(title: str, items: Iterable[str]) -> None:
    typed_items = list(items)
    if not typed_items:
        return
    info(title)
    for item in typed_items:
        typer.echo(f"- {item}")


def render_sim_error(exc: SimError) -> None:
    error(f"{exc.error_code}: {exc.message}")
    if exc.hint:
        warning(exc.hint, err=True)
