"""Invariants command - Gram invariants of R(ℓ)⁰ against the divisor table."""

import time
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table
from sympy import divisors

from app.bounds import traceless_partial_dual
from app.core.exceptions import EXIT_CHECK_FAILED
from app.core.rationals import format_rational
from app.lattice import LatticeService, OrderService
from .. import __version__
from ..config import RunManifest, hash_options
from ..utils import console, write_csv, write_manifest

COLUMNS = ["d_B", "N", "ell", "content", "level", "discriminant", "divisors", "expected", "match"]


def invariants_command(d_B: int, N: int, ell: Optional[int], out: Optional[Path]) -> None:
    """
    Print (and optionally save) the invariants of R(ℓ)⁰ for every requested ℓ.

    Exits with code 1 when any elementary divisor triple differs from the
    case table.
    """
    started = time.perf_counter()
    console.print(f"\n[bold blue]🔢 Gram invariants of R(ℓ)⁰ for d_B={d_B}, N={N}[/bold blue]\n")
    ells: List[int] = [ell] if ell is not None else [int(e) for e in divisors(d_B * N)]

    rows = []
    for e in ells:
        invariants = LatticeService.gram_invariants(traceless_partial_dual(d_B, N, e))
        expected = OrderService.expected_elementary_divisors(d_B, N, e)
        rows.append({
            "d_B": d_B, "N": N, "ell": e,
            "content": invariants.content,
            "level": invariants.level,
            "discriminant": invariants.discriminant,
            "divisors": " ".join(format_rational(v) for v in invariants.elementary_divisors),
            "expected": " ".join(format_rational(v) for v in expected),
            "match": tuple(invariants.elementary_divisors) == tuple(expected),
        })

    table = Table(title="📐 Elementary divisors", show_lines=True)
    for column in COLUMNS[2:]:
        table.add_column(column, style="cyan" if column == "ell" else None)
    for row in rows:
        verdict = "[green]✓ exact[/green]" if row["match"] else "[red]✗ differs[/red]"
        table.add_row(str(row["ell"]), format_rational(row["content"]), format_rational(row["level"]),
                      format_rational(row["discriminant"]), row["divisors"], row["expected"], verdict)
    console.print(table)

    passed = all(row["match"] for row in rows)
    if out is not None:
        config_hash = hash_options({"command": "invariants", "d_B": d_B, "N": N, "ell": ell})
        path = write_csv(Path(out) / "invariants.csv", COLUMNS, rows, config_hash)
        write_manifest(Path(out), RunManifest(
            tool_version=__version__, command="invariants", config_hash=config_hash,
            wall_seconds=time.perf_counter() - started, checks={"elementary_divisors": passed},
            outputs=[path.name]))
        console.print(f"[dim]Saved {path}[/dim]")
    if not passed:
        raise typer.Exit(EXIT_CHECK_FAILED)
