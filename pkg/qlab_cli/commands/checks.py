"""Checks command - exact structural identities behind the counting bounds."""

import time
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from app.archgeom import CuspService
from app.bounds import COMMUTATOR_MODES, ChecksService, CountExperiment
from app.core.exceptions import EXIT_CHECK_FAILED
from app.qalg import QuaternionService
from .. import __version__
from ..config import RunManifest, hash_options
from ..utils import console, write_csv, write_manifest

COLUMNS = ["check", "detail", "passed"]


def checks_command(d_B: int, N: int, ell: int, box: int, seed: int, points: List[complex],
                   T: float, out: Optional[Path]) -> None:
    """
    Run the commutator congruences, the norm decomposition, the determinant
    partition identity and the AL-maximal point inequalities.

    Exits with code 1 when any of them fails.
    """
    started = time.perf_counter()
    console.print(f"\n[bold blue]🔍 Structural checks for d_B={d_B}, N={N}, ℓ={ell}[/bold blue]\n")
    rows = []

    for mode in COMMUTATOR_MODES:
        report = ChecksService.commutator_checks(d_B, N, ell, mode, box)
        rows.append({"check": f"commutator_{mode}",
                     "detail": f"{report.pairs} pairs, nr ∈ {report.norm_modulus}·Z, "
                               f"{report.membership_failures + report.norm_failures} failures",
                     "passed": report.passed})

    algebra = QuaternionService.algebra_from_discriminant(d_B)
    failures = ChecksService.norm_decomposition_sweep(algebra, seed=seed)
    rows.append({"check": "norm_decomposition", "detail": f"{failures} failures", "passed": failures == 0})

    experiment = CountExperiment(d_B=d_B, N=N, ell=ell, T=T)
    total, direct = ChecksService.partition_check(experiment)
    rows.append({"check": "determinant_partition", "detail": f"Σ_n {total} vs {direct}",
                 "passed": total == direct})

    if d_B == 1:
        for z in points:
            report = CuspService.lemma61_check(z, N)
            rows.append({"check": "al_maximal_point",
                         "detail": f"z*={report.z_max:.6f}, min ratio {report.min_ratio:.4f}",
                         "passed": report.passed})

    table = Table(title="📋 Checks")
    table.add_column("check", style="cyan")
    table.add_column("detail")
    table.add_column("verdict", justify="center")
    for row in rows:
        table.add_row(row["check"], row["detail"], "[green]✓[/green]" if row["passed"] else "[red]✗[/red]")
    console.print(table)

    passed = all(row["passed"] for row in rows)
    if out is not None:
        config_hash = hash_options({"command": "checks", "d_B": d_B, "N": N, "ell": ell, "box": box,
                                    "seed": seed, "z": [str(z) for z in points], "T": T})
        path = write_csv(Path(out) / "checks.csv", COLUMNS, rows, config_hash)
        write_manifest(Path(out), RunManifest(
            tool_version=__version__, command="checks", config_hash=config_hash, seed=seed,
            wall_seconds=time.perf_counter() - started,
            checks={row["check"]: row["passed"] for row in rows}, outputs=[path.name]))
    if not passed:
        raise typer.Exit(EXIT_CHECK_FAILED)
