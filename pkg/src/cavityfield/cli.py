"""Command-line front end.

Usage::

    cavityfield verify --config run.json
    cavityfield fields --config run.json --family 2 --t 0.5 --out fields.csv
    cavityfield duality-scan --config run.json --angles 16
    cavityfield convergence --config run.json --family 1 --levels 4
    cavityfield quantum-expect --config run.json --family 1

Without ``--config`` the built-in natural-unit configuration is used: one
mode ``alpha=1`` with ``q(t) = cos t`` in a cavity of length ``pi``.
"""

from __future__ import annotations

import json
import sys

import click

from . import tables
from .classical import snapshot_source
from .config import ConfigError, RunConfig, load_config
from .duality import duality_scan
from .verify import all_passed, run_checks

EXIT_CONFIG = 2


def _load(path) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        return load_config(path)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _emit(text: str, cfg: RunConfig, out):
    path = out or cfg.output_path
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


config_option = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                             help="JSON run configuration.")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Output file (default: output.path from the config, else stdout).")
family_option = click.option("--family", type=click.Choice(["1", "2"]), default="1", show_default=True,
                             help="Solution family.")
time_option = click.option("--t", "t", type=float, default=None, help="Evaluation time (default: time.t).")


@click.group()
def main():
    """Classical and quantized fields of a one-dimensional cavity."""


@main.command()
@config_option
@out_option
def verify(config_path, out):
    """Run every self-check and print a JSON report; exit 0 iff all pass."""
    cfg = _load(config_path)
    try:
        results = run_checks(cfg)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    _emit(json.dumps([r.as_dict() for r in results], indent=2) + "\n", cfg, out)
    sys.exit(0 if all_passed(results) else 1)


@main.command()
@config_option
@family_option
@time_option
@out_option
def fields(config_path, family, t, out):
    """Field snapshot of one solution family on the configured grid."""
    cfg = _load(config_path)
    t = cfg.t if t is None else t
    try:
        snap = snapshot_source(int(family), cfg.modes, cfg.cavity, cfg.grid)(t)
    except ValueError as exc:
        _fail(exc)
    _emit(tables.render(tables.snapshot_rows(snap), tables.SNAPSHOT_COLUMNS, cfg.output_format), cfg, out)


@main.command("duality-scan")
@config_option
@family_option
@time_option
@click.option("--angles", type=int, default=16, show_default=True, help="Number of equally spaced angles.")
@out_option
def duality_scan_cmd(config_path, family, t, angles, out):
    """Energy and Maxwell residuals of duality-rotated fields versus angle."""
    cfg = _load(config_path)
    t = cfg.t if t is None else t
    try:
        source = snapshot_source(int(family), cfg.modes, cfg.cavity, cfg.grid)
        rows = duality_scan(source, cfg.cavity, t, cfg.time_step, angles)
    except ValueError as exc:
        _fail(exc)
    _emit(tables.render(rows, tables.SCAN_COLUMNS, cfg.output_format), cfg, out)


@main.command()
@config_option
@family_option
@time_option
@click.option("--levels", type=int, default=3, show_default=True, help="Number of refinement levels (>= 2).")
@out_option
def convergence(config_path, family, t, levels, out):
    """Residual norms under simultaneous halving of dz and dt, with observed orders."""
    cfg = _load(config_path)
    t = cfg.t if t is None else t
    try:
        rows = tables.convergence_rows(int(family), cfg.modes, cfg.cavity, cfg.grid, t, cfg.time_step, levels)
    except ValueError as exc:
        _fail(exc)
    _emit(tables.render(rows, tables.CONVERGENCE_COLUMNS, cfg.output_format), cfg, out)


@main.command("quantum-expect")
@config_option
@family_option
@time_option
@out_option
def quantum_expect(config_path, family, t, out):
    """Coherent-state field moments of the lowest configured mode along the grid."""
    cfg = _load(config_path)
    t = cfg.t if t is None else t
    if not cfg.modes:
        _fail(ValueError("quantum-expect needs at least one mode"))
    mode = min(cfg.modes, key=lambda s: s.alpha)
    try:
        rows = tables.expectation_rows(int(family), mode, cfg.cavity, cfg.grid, t, cfg.fock_dim, cfg.coherent)
    except ValueError as exc:
        _fail(exc)
    _emit(tables.render(rows, tables.EXPECT_COLUMNS, cfg.output_format), cfg, out)


if __name__ == "__main__":
    main()
