"""Count commands - Type I / Type II counts against their bounds."""

import time
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from app.bounds import BoundReport, BoundsService, CountExperiment
from app.core.exceptions import EXIT_CHECK_FAILED
from app.core.settings import settings
from .. import __version__
from ..config import ExperimentConfig, RunManifest, hash_options
from ..utils import console, format_value, write_csv, write_manifest


def _table(reports: List[BoundReport], title: str) -> Table:
    table = Table(title=title, show_lines=False)
    for column in BoundReport.columns():
        table.add_column(column, justify="right")
    for report in reports:
        data = report.model_dump()
        table.add_row(*(format_value(data[c]) for c in BoundReport.columns()))
    return table


def _verdicts(reports: List[BoundReport], calibration: float, minimum: float) -> dict:
    ratio_ok = all(r.ratio <= calibration for r in reports)
    minimum_ok = all(r.first_minimum >= minimum * r.threshold for r in reports if r.kind.startswith("type1"))
    return {"bounded_ratio": ratio_ok, "first_minimum": minimum_ok}


def _finish(reports: List[BoundReport], command: str, config_hash: str, seed: Optional[int],
            out: Optional[Path], started: float, calibration: float, minimum: float) -> None:
    console.print(_table(reports, f"📊 {command}"))
    checks = _verdicts(reports, calibration, minimum)
    maxima = BoundsService.max_ratios(reports)
    for kind, worst in sorted(maxima.items()):
        console.print(f"  [bold]{kind}[/bold] max ratio [cyan]{worst:.6g}[/cyan]")
    if out is not None:
        rows = [r.model_dump() for r in reports]
        path = write_csv(Path(out) / "counts.csv", BoundReport.columns(), rows, config_hash)
        write_manifest(Path(out), RunManifest(
            tool_version=__version__, command=command, config_hash=config_hash, seed=seed,
            wall_seconds=time.perf_counter() - started, checks=checks, outputs=[path.name]))
        console.print(f"[dim]Saved {path}[/dim]")
    if not all(checks.values()):
        console.print(f"[bold red]✗ Checks failed:[/bold red] {checks}")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print("[bold green]✓ All ratios within the calibration constant[/bold green]")


def count_command(kind: str, experiment: Optional[CountExperiment], config: Optional[Path],
                  out: Optional[Path], workers: Optional[int]) -> None:
    """
    Run one experiment from flags, or the grid of a config file.

    Args:
        kind: "type1" or "type2"
        experiment: the experiment built from flags (ignored with a config)
        config: ExperimentConfig JSON file
        out: output directory for CSV + manifest
        workers: worker processes for grid sweeps
    """
    started = time.perf_counter()
    if config is not None:
        cfg = ExperimentConfig.load(config)
        console.print(f"\n[bold blue]🧮 Sweep '{cfg.name}' ({cfg.config_hash()[:12]})[/bold blue]\n")
        reports = BoundsService.sweep(cfg.grid, workers, kinds=(kind,))
        _finish(reports, f"count {kind}", cfg.config_hash(), cfg.seed, out or cfg.output_dir,
                started, cfg.calibration_constant, cfg.minimum_constant)
        return

    if kind == "type1":
        report = BoundsService.type1_report(experiment)
    else:
        report = BoundsService.type2_report(experiment)
    config_hash = hash_options({"command": f"count {kind}", **experiment.model_dump(mode="json")})
    _finish([report], f"count {kind}", config_hash, experiment.rotation_seed, out, started,
            settings.CALIBRATION_CONSTANT, settings.MINIMUM_CONSTANT)
