"""Theta commands - evaluation, transformation laws, PDE and the lift identity."""

import time
from pathlib import Path
from typing import List, Optional, Sequence

import typer
from rich.table import Table
from sympy import divisors

from app.core.exceptions import EXIT_CHECK_FAILED
from app.theta import NewformData, NewformService, PeterssonService, ThetaService, ThetaSpec, TransformReport
from .. import __version__
from ..config import RunManifest, hash_options
from ..utils import console, format_value, write_csv, write_json, write_manifest

TRANSFORM_COLUMNS = ["check", "family", "ell", "kappa", "factor", "deviation", "scale", "tolerance", "passed"]


def _save(out: Optional[Path], command: str, options: dict, checks: dict, started: float,
          csv_name: Optional[str] = None, columns: Sequence[str] = (), rows: Sequence[dict] = (),
          payload: Optional[dict] = None) -> None:
    if out is None:
        return
    config_hash = hash_options({"command": command, **options})
    outputs = []
    if csv_name:
        outputs.append(write_csv(Path(out) / csv_name, columns, rows, config_hash).name)
    if payload is not None:
        outputs.append(write_json(Path(out) / f"{command.replace(' ', '_')}.json", payload).name)
    write_manifest(Path(out), RunManifest(
        tool_version=__version__, command=command, config_hash=config_hash,
        wall_seconds=time.perf_counter() - started, checks=checks, outputs=outputs))
    console.print(f"[dim]Saved {', '.join(outputs)} to {out}[/dim]")


def _transform_table(reports: List[TransformReport], title: str) -> Table:
    table = Table(title=title)
    for column in TRANSFORM_COLUMNS[1:]:
        table.add_column(column, justify="right")
    for r in reports:
        verdict = "[green]✓[/green]" if r.passed else "[red]✗[/red]"
        table.add_row(r.family, str(r.ell), str(r.kappa), format_value(r.factor),
                      f"{r.deviation:.3e}", f"{r.scale:.3e}", f"{r.tolerance:.1e}", verdict)
    return table


def _transform_rows(reports: List[TransformReport]) -> List[dict]:
    return [{**r.model_dump(exclude={"points"}), "passed": r.passed} for r in reports]


def eval_command(spec: ThetaSpec, s: complex) -> None:
    """Print θ_{g,ℓ}(s)."""
    value = ThetaService.theta_eval(spec, s)
    console.print(f"\n[bold blue]θ[/bold blue] family={spec.family} κ={spec.kappa} "
                  f"d_B={spec.d_B} N={spec.N} ℓ={spec.ell} at s={s}")
    console.print(f"  [cyan]{format_value(value.real)}[/cyan] "
                  f"[dim]{format_value(value.imag)}i[/dim]\n")


def check_al_command(spec: ThetaSpec, ell: Optional[int], out: Optional[Path]) -> None:
    """θ_{g,1}|τ_ℓ against μ(gcd(ℓ, d_B))/ℓ · θ_{g,ℓ} for one or every ℓ > 1."""
    started = time.perf_counter()
    ells = [ell] if ell is not None else [int(e) for e in divisors(spec.level) if e > 1]
    reports = [ThetaService.al_transform_check(spec, e) for e in ells]
    if reports:
        console.print(_transform_table(reports, "🔁 Atkin–Lehner relation"))
    else:
        console.print("[yellow]⚠️  Level 1 has no Atkin–Lehner operator to check[/yellow]")
    passed = all(r.passed for r in reports)
    _save(out, "theta check-al", spec.model_dump(), {"atkin_lehner": passed}, started,
          "theta_al.csv", TRANSFORM_COLUMNS, _transform_rows(reports))
    if not passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


def check_mod_command(spec: ThetaSpec, gamma: Optional[Sequence[int]], out: Optional[Path]) -> None:
    """Weight-κ invariance under γ ∈ Γ₀(d_BN); γ = [[1,0],[d_BN,1]] by default."""
    started = time.perf_counter()
    if gamma is None:
        matrix = ((1, 0), (spec.level, 1))
    else:
        a, b, c, d = gamma
        matrix = ((a, b), (c, d))
    report = ThetaService.gamma0_modularity_check(spec, matrix)
    console.print(_transform_table([report], f"🔁 Γ₀({spec.level}) invariance, γ={matrix}"))
    _save(out, "theta check-mod", {**spec.model_dump(), "gamma": matrix}, {"gamma0": report.passed},
          started, "theta_gamma0.csv", TRANSFORM_COLUMNS, _transform_rows([report]))
    if not report.passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


def check_pde_command(family: str, k: int, m: int, out: Optional[Path]) -> None:
    """Finite-difference residuals of the archimedean PDE for h, h/2, h/4."""
    started = time.perf_counter()
    report = ThetaService.pde_check(family, k, m)
    table = Table(title=f"∂ PDE residuals ({family}, κ={report.kappa})")
    table.add_column("h", justify="right")
    table.add_column("residual", justify="right")
    table.add_column("ratio", justify="right")
    ratios = [None] + report.ratios
    for h, residual, ratio in zip(report.steps, report.residuals, ratios):
        table.add_row(format_value(h), f"{residual:.4e}", "" if ratio is None else f"{ratio:.4f}")
    console.print(table)
    rows = [{"h": h, "residual": r} for h, r in zip(report.steps, report.residuals)]
    _save(out, "theta check-pde", {"family": family, "k": k, "m": m}, {"pde_order_two": report.passed},
          started, "theta_pde.csv", ["h", "residual"], rows)
    if not report.passed:
        console.print("[bold red]✗ Residuals do not decay like h²[/bold red]")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print("[bold green]✓ Residuals decay like h²[/bold green]")


def load_newform(name: str) -> NewformData:
    """'delta' for the built-in Δ, otherwise a JSON file of coefficients."""
    if name.lower() == "delta":
        return NewformService.delta_qexp()
    return NewformData.load(name)


def verify_lift_command(newform: str, points: List[complex], w: Optional[complex], accuracy: float,
                        scheme: str, tolerance: float, out: Optional[Path]) -> None:
    """⟨θ_z, f̃⟩/‖f̃‖² against |f̃(z)|²/‖f̃‖² at every z."""
    started = time.perf_counter()
    f = load_newform(newform)
    console.print(f"\n[bold blue]🧩 Theta lift of a weight {f.k} form ({f.source})[/bold blue]\n")
    report = PeterssonService.theta_lift_identity_check(f, points, w=w, accuracy=accuracy,
                                                        scheme=scheme, tolerance=tolerance)
    table = Table(title=f"constant {report.constant}, ‖f̃‖² = {report.norm_hyperbolic:.6e}")
    for column in ("z", "lhs", "rhs", "ratio", "rel. error"):
        table.add_column(column, justify="right")
    for p in report.points:
        table.add_row(format_value(p.z), format_value(p.lhs.real), format_value(p.rhs),
                      format_value(p.ratio), f"{p.relative_error:.2e}")
    console.print(table)
    if report.phase_deviation is not None:
        console.print(f"  phase deviation [cyan]{report.phase_deviation:.2e}[/cyan]")
    _save(out, "theta verify-lift",
          {"newform": newform, "z": [str(z) for z in points], "w": str(w), "accuracy": accuracy,
           "scheme": scheme}, {"theta_lift": report.passed}, started,
          payload=report.model_dump())
    if not report.passed:
        console.print(f"[bold red]✗ Lift identity off by {report.max_relative_error:.2e}[/bold red]")
        raise typer.Exit(EXIT_CHECK_FAILED)
    console.print(f"[bold green]✓ Lift identity holds to {report.max_relative_error:.2e}[/bold green]")
