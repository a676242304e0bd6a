"""Commands package for the qlab CLI."""

from .invariants import invariants_command
from .count import count_command
from .theta import (
    eval_command,
    check_al_command,
    check_mod_command,
    check_pde_command,
    verify_lift_command,
)
from .checks import checks_command
from .report import report_command, aggregate

__all__ = [
    "invariants_command",
    "count_command",
    "eval_command",
    "check_al_command",
    "check_mod_command",
    "check_pde_command",
    "verify_lift_command",
    "checks_command",
    "report_command",
    "aggregate",
]
