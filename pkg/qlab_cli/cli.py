"""
qlab CLI - Main CLI Application

The Typer application behind `python manage.py`. Command bodies live in
commands/; this module parses flags and maps failures to exit codes.
"""

from pathlib import Path
from typing import Callable, List, Optional

import typer

from app.bounds import CountExperiment
from app.core.exceptions import EXIT_USAGE, setup_exit_codes
from app.core.logging import apply_logger_config, setup_logging
from app.theta import FAMILIES, ThetaSpec
from .commands import (
    check_al_command,
    check_mod_command,
    check_pde_command,
    checks_command,
    count_command,
    eval_command,
    invariants_command,
    report_command,
    verify_lift_command,
)
from .utils import console, guarded, parse_complex, parse_rational

# Initialize Typer app
app = typer.Typer(
    name="qlab",
    help="Quaternion Lattice Lab - lattice point counts and theta kernels",
    add_completion=False,
    rich_markup_mode="rich",
)
count_app = typer.Typer(help="Type I / Type II lattice point counts against their bounds")
theta_app = typer.Typer(help="Theta kernels: evaluation, transformation laws, PDE, lift identity")
app.add_typer(count_app, name="count")
app.add_typer(theta_app, name="theta")

setup_exit_codes()


def _run(body: Callable[[], None]) -> None:
    guarded(body)()


def _experiment(d_B: int, N: int, ell: int, delta: float, T: float, n: Optional[str],
                z: str, seed: Optional[int], shape: str) -> CountExperiment:
    point = parse_complex(z)
    return CountExperiment(d_B=d_B, N=N, ell=ell, delta=delta, T=T, n=parse_rational(n),
                           x=point.real, y=point.imag, rotation_seed=seed, shape=shape)


def _theta_spec(family: str, k: int, m: int, d_B: int, N: int, ell: int, z: str,
                seed: Optional[int], accuracy: Optional[float]) -> ThetaSpec:
    if family not in FAMILIES:
        console.print(f"[bold red]❌ Error:[/bold red] unknown family '{family}', use one of {', '.join(FAMILIES)}")
        raise typer.Exit(EXIT_USAGE)
    point = parse_complex(z)
    extra = {} if accuracy is None else {"accuracy": accuracy}
    return ThetaSpec(family=family, k=k, m=m, d_B=d_B, N=N, ell=ell, x=point.real, y=point.imag,
                     rotation_seed=seed, **extra)


# ==================== Invariants ====================

@app.command("invariants")
def invariants(
    d_B: int = typer.Option(1, "--db", help="Discriminant of the builtin order"),
    N: int = typer.Option(1, "--level", help="Squarefree level coprime to d_B"),
    split: bool = typer.Option(False, "--split", help="Use the split algebra (d_B = 1)"),
    ell: Optional[int] = typer.Option(None, "--ell", help="Divisor ℓ of d_B·N (all divisors when omitted)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
):
    """
    Gram invariants of R(ℓ)⁰ and the elementary divisor comparison.

    Examples:

      $ python manage.py invariants --split --level 6 --ell 2

      $ python manage.py invariants --db 2 --level 1 --ell 2
    """
    _run(lambda: invariants_command(1 if split else d_B, N, ell, out))


# ==================== Counts ====================

def _count(kind: str, d_B: int, N: int, ell: int, delta: float, T: float, n: Optional[str], z: str,
           seed: Optional[int], shape: str, out: Optional[Path], workers: Optional[int],
           config: Optional[Path]) -> None:
    def body() -> None:
        experiment = None
        if config is None:
            experiment = _experiment(d_B, N, ell, delta, T, n, z, seed, shape)
        count_command(kind, experiment, config, out, workers)

    _run(body)


@count_app.command("type1")
def count_type1(
    d_B: int = typer.Option(1, "--db", help="Discriminant of the builtin order"),
    N: int = typer.Option(1, "--level", help="Level"),
    ell: int = typer.Option(1, "--ell", help="Divisor ℓ of d_B·N"),
    delta: float = typer.Option(1.0, "--delta", help="Pinch δ in (0, 1]"),
    T: float = typer.Option(1.0, "--T", help="Radius T"),
    z: str = typer.Option("i", "--z", help="Frame point for split orders"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Rotation seed for definite orders"),
    shape: str = typer.Option("Omega", "--shape", help="Omega or Psi (Psi is definite only)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes for grid sweeps"),
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment config JSON"),
):
    """
    Count |R(ℓ;g)⁰ ∩ Ω(δ,T)| against the Type I bound.

    Examples:

      $ python manage.py count type1 --level 6 --ell 3 --delta 0.1 --T 2

      $ python manage.py count type1 --config experiment.json --workers 4
    """
    _count("type1", d_B, N, ell, delta, T, None, z, seed, shape, out, workers, config)


@count_app.command("type2")
def count_type2(
    d_B: int = typer.Option(1, "--db", help="Discriminant of the builtin order"),
    N: int = typer.Option(1, "--level", help="Level"),
    ell: int = typer.Option(1, "--ell", help="Divisor ℓ of d_B·N"),
    delta: float = typer.Option(1.0, "--delta", help="Pinch δ in (0, 1]"),
    T: float = typer.Option(1.0, "--T", help="Radius T"),
    n: str = typer.Option("1", "--n", help="Determinant n ∈ (1/ℓ)Z, e.g. 1 or -3/2"),
    z: str = typer.Option("i", "--z", help="Frame point for split orders"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Rotation seed for definite orders"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Worker processes for grid sweeps"),
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment config JSON"),
):
    """
    Count |R(ℓ;g)⁰ ∩ Ω(δ,T) ∩ det⁻¹{n}| against the Type II bound.

    Examples:

      $ python manage.py count type2 --n 1 --T 1.5
    """
    _count("type2", d_B, N, ell, delta, T, n, z, seed, "Omega", out, workers, config)


# ==================== Theta ====================

@theta_app.command("eval")
def theta_eval(
    family: str = typer.Option("maass", "--family", help=f"One of {', '.join(FAMILIES)}"),
    k: int = typer.Option(0, "--k", help="Weight k"),
    m: int = typer.Option(0, "--m", help="Harmonic degree m (def_sph)"),
    d_B: int = typer.Option(1, "--db", help="Discriminant"),
    N: int = typer.Option(1, "--level", help="Level"),
    ell: int = typer.Option(1, "--ell", help="Divisor ℓ of d_B·N"),
    z: str = typer.Option("i", "--z", help="Frame point z (split families)"),
    s: str = typer.Option("i", "--s", help="Evaluation point s"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Rotation seed (definite families)"),
    accuracy: Optional[float] = typer.Option(None, "--accuracy", help="Truncation accuracy"),
):
    """
    Evaluate θ_{g,ℓ}(s).

    Examples:

      $ python manage.py theta eval --family maass --z i --s i
    """
    _run(lambda: eval_command(_theta_spec(family, k, m, d_B, N, ell, z, seed, accuracy), parse_complex(s)))


@theta_app.command("check-al")
def theta_check_al(
    family: str = typer.Option("maass", "--family", help=f"One of {', '.join(FAMILIES)}"),
    k: int = typer.Option(0, "--k", help="Weight k"),
    m: int = typer.Option(0, "--m", help="Harmonic degree m (def_sph)"),
    d_B: int = typer.Option(1, "--db", help="Discriminant"),
    N: int = typer.Option(2, "--level", help="Level"),
    ell: Optional[int] = typer.Option(None, "--ell", help="ℓ > 1 (every divisor when omitted)"),
    z: str = typer.Option("i", "--z", help="Frame point z (split families)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Rotation seed (definite families)"),
    accuracy: Optional[float] = typer.Option(None, "--accuracy", help="Truncation accuracy"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
):
    """
    Check θ_{g,1}|τ_ℓ = μ(gcd(ℓ, d_B))/ℓ · θ_{g,ℓ}.

    Examples:

      $ python manage.py theta check-al --level 6 --ell 3

      $ python manage.py theta check-al --family def_sph --m 2 --db 2 --ell 2
    """
    _run(lambda: check_al_command(_theta_spec(family, k, m, d_B, N, 1, z, seed, accuracy), ell, out))


@theta_app.command("check-mod")
def theta_check_mod(
    family: str = typer.Option("maass", "--family", help=f"One of {', '.join(FAMILIES)}"),
    k: int = typer.Option(0, "--k", help="Weight k"),
    m: int = typer.Option(0, "--m", help="Harmonic degree m (def_sph)"),
    d_B: int = typer.Option(1, "--db", help="Discriminant"),
    N: int = typer.Option(1, "--level", help="Level"),
    ell: int = typer.Option(1, "--ell", help="Divisor ℓ of d_B·N"),
    gamma: Optional[str] = typer.Option(None, "--gamma", help="γ as 'a,b,c,d' (default 1,0,d_B·N,1)"),
    z: str = typer.Option("i", "--z", help="Frame point z (split families)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Rotation seed (definite families)"),
    accuracy: Optional[float] = typer.Option(None, "--accuracy", help="Truncation accuracy"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
):
    """
    Check weight-κ invariance of θ_{g,ℓ} under γ ∈ Γ₀(d_B·N).

    Examples:

      $ python manage.py theta check-mod --level 2 --ell 2

      $ python manage.py theta check-mod --family def_hol --k 2 --db 2 --gamma 1,1,0,1
    """
    def body() -> None:
        entries = None
        if gamma is not None:
            try:
                entries = [int(v) for v in gamma.split(",")]
            except ValueError:
                entries = []
            if len(entries) != 4:
                console.print(f"[bold red]❌ Error:[/bold red] '{gamma}' is not 'a,b,c,d'")
                raise typer.Exit(EXIT_USAGE)
        check_mod_command(_theta_spec(family, k, m, d_B, N, ell, z, seed, accuracy), entries, out)

    _run(body)


@theta_app.command("check-pde")
def theta_check_pde(
    family: str = typer.Option("maass", "--family", help=f"One of {', '.join(FAMILIES)}"),
    k: int = typer.Option(0, "--k", help="Weight k"),
    m: int = typer.Option(0, "--m", help="Harmonic degree m (def_sph)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
):
    """
    O(h²) table of finite-difference PDE residuals for a test function.

    Examples:

      $ python manage.py theta check-pde --family def_hol --k 2
    """
    if family not in FAMILIES:
        console.print(f"[bold red]❌ Error:[/bold red] unknown family '{family}'")
        raise typer.Exit(EXIT_USAGE)
    _run(lambda: check_pde_command(family, k, m, out))


@theta_app.command("verify-lift")
def theta_verify_lift(
    newform: str = typer.Option("delta", "--newform", help="'delta' or a coefficient JSON file"),
    z: List[str] = typer.Option(["i", "2i"], "--z", help="Points z (repeatable)"),
    w: Optional[str] = typer.Option(None, "--w", help="Second point for the phase check"),
    accuracy: float = typer.Option(1e-7, "--accuracy", help="Truncation accuracy of the kernel"),
    scheme: str = typer.Option("gauss", "--scheme", help="Quadrature: gauss or adaptive"),
    tolerance: float = typer.Option(1e-3, "--tolerance", help="Allowed relative error"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for JSON + manifest"),
):
    """
    Check ⟨θ_z, f̃⟩/‖f̃‖² against |f̃(z)|²/‖f̃‖² for a level 1 newform.

    Examples:

      $ python manage.py theta verify-lift --newform delta --z i

      $ python manage.py theta verify-lift --z i --z 2i --w 0.3+1.2i
    """
    if scheme not in ("gauss", "adaptive"):
        console.print(f"[bold red]❌ Error:[/bold red] unknown scheme '{scheme}'")
        raise typer.Exit(EXIT_USAGE)
    points = [parse_complex(v) for v in z]
    second = parse_complex(w) if w is not None else None
    _run(lambda: verify_lift_command(newform, points, second, accuracy, scheme, tolerance, out))


# ==================== Checks and reports ====================

@app.command("checks")
def checks(
    d_B: int = typer.Option(1, "--db", help="Discriminant of the builtin order"),
    N: int = typer.Option(1, "--level", help="Level"),
    ell: int = typer.Option(1, "--ell", help="Divisor ℓ of d_B·N"),
    box: int = typer.Option(1, "--box", help="Coefficient box radius for commutators"),
    seed: int = typer.Option(0, "--seed", help="Seed of the norm decomposition sample"),
    z: List[str] = typer.Option(["i", "0.5+0.7i"], "--z", help="Points for the AL-maximal check"),
    T: float = typer.Option(2.0, "--T", help="Radius of the partition identity check"),
    out: Optional[Path] = typer.Option(None, "--out", help="Directory for CSV + manifest"),
):
    """
    Exact structural checks: commutators, norm decomposition, partition, AL-maximal points.

    Examples:

      $ python manage.py checks --level 6 --ell 2

      $ python manage.py checks --db 3 --box 2
    """
    points = [parse_complex(v) for v in z]
    _run(lambda: checks_command(d_B, N, ell, box, seed, points, T, out))


@app.command("report")
def report(
    paths: List[Path] = typer.Argument(None, help="Count CSVs to aggregate"),
    calibration: Optional[float] = typer.Option(None, "--calibration", help="Calibration constant"),
    out: Optional[Path] = typer.Option(None, "--out", help="Summary JSON file"),
):
    """
    Aggregate count CSVs into max ratios per bound.

    Examples:

      $ python manage.py report results/counts.csv
    """
    _run(lambda: report_command(list(paths or []), calibration, out))


@app.command("version")
def version():
    """Show qlab version."""
    from . import __version__
    console.print(f"[bold cyan]qlab[/bold cyan] version [green]{__version__}[/green]")


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        "-v",
        help="Show version and exit",
        is_flag=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", help="Log every package at DEBUG"),
):
    """
    qlab - Quaternion Lattice Lab

    Exact lattice invariants, lattice point counts against their bounds and
    theta kernel checks, with reproducible CSV / JSON output.
    """
    if version:
        from . import __version__
        console.print(f"[bold cyan]qlab[/bold cyan] version [green]{__version__}[/green]")
        raise typer.Exit()

    setup_logging("DEBUG" if verbose else None)
    if not verbose:
        apply_logger_config()

    # Show help if no command is provided
    if ctx.invoked_subcommand is None:
        console.print(ctx.get_help())


# Entry point for running the CLI
if __name__ == "__main__":
    app()
