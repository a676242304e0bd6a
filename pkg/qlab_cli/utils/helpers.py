"""Helpers for parsing flags and turning exceptions into exit codes."""

import functools
from fractions import Fraction
from typing import Callable, Optional

import typer
from rich.console import Console

from app.core.exceptions import EXIT_USAGE, exit_code_for
from app.core.rationals import to_fraction

console = Console()


def parse_complex(text: str) -> complex:
    """
    Parse a point of the upper half plane.

    Examples:
        i -> 1j
        2i -> 2j
        0.5+1.2i -> (0.5+1.2j)
    """
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        console.print(f"[bold red]❌ Error:[/bold red] '{text}' is not a complex number")
        raise typer.Exit(EXIT_USAGE)


def parse_rational(text: Optional[str]) -> Optional[Fraction]:
    """
    Parse "p/q", an integer or a decimal; None passes through.

    Examples:
        "3/4" -> Fraction(3, 4)
        "-1" -> Fraction(-1, 1)
    """
    if text is None:
        return None
    try:
        return to_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        console.print(f"[bold red]❌ Error:[/bold red] '{text}' is not a rational number")
        raise typer.Exit(EXIT_USAGE)


def guarded(command: Callable) -> Callable:
    """Run a command, mapping raised exceptions to the lab's exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except typer.Exit:
            raise
        except Exception as exc:
            code = exit_code_for(exc)
            console.print(f"[bold red]❌ Error:[/bold red] {exc}")
            raise typer.Exit(code)

    return wrapper
