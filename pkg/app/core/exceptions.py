"""
Exception base and exit-code mapping for the lab.

Feature packages derive their exceptions from LabException. The CLI turns
any raised exception into a process exit code through exit_code_for(),
the same way the web layer used to turn exceptions into HTTP responses.
"""
from typing import Callable, Dict, Type
from pydantic import ValidationError
from app.core.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class LabException(Exception):
    """Base exception for all lab errors."""

    exit_code: int = EXIT_USAGE


class CheckFailedError(LabException):
    """Raised when a numeric or exact verification does not hold."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, check: str, detail: str):
        self.check = check
        self.detail = detail
        super().__init__(f"Check '{check}' failed: {detail}")


class BudgetExceededError(LabException):
    """Raised when a computation would exceed its configured budget."""

    exit_code = EXIT_CHECK_FAILED

    def __init__(self, what: str, needed: float, budget: float):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"{what}: needs about {needed:g}, budget is {budget:g}")


ExitCodeResolver = Callable[[BaseException], int]

_EXIT_CODES: Dict[Type[BaseException], ExitCodeResolver] = {}


def register_exit_code(exc_type: Type[BaseException], resolver: ExitCodeResolver) -> None:
    """
    Register how an exception type maps to a process exit code.

    Args:
        exc_type: Exception class (subclasses match too)
        resolver: Callable returning the exit code for an instance
    """
    _EXIT_CODES[exc_type] = resolver


def setup_exit_codes() -> None:
    """Configure the default exception to exit-code mapping."""
    register_exit_code(LabException, lambda exc: exc.exit_code)
    register_exit_code(ValidationError, lambda exc: EXIT_USAGE)
    register_exit_code(ValueError, lambda exc: EXIT_USAGE)
    register_exit_code(FileNotFoundError, lambda exc: EXIT_USAGE)
    register_exit_code(ArithmeticError, lambda exc: EXIT_CHECK_FAILED)
    logger.debug("✓ Exit code mapping configured")


def exit_code_for(exc: BaseException) -> int:
    """
    Resolve the exit code of an exception, most specific type first.

    Args:
        exc: The raised exception

    Returns:
        int: 1 for check failures, 2 for usage errors
    """
    if not _EXIT_CODES:
        setup_exit_codes()
    for klass in type(exc).__mro__:
        resolver = _EXIT_CODES.get(klass)
        if resolver is not None:
            return resolver(exc)
    logger.error(f"✗ Unhandled exception: {exc}", exc_info=exc)
    return EXIT_CHECK_FAILED


__all__ = [
    "EXIT_OK",
    "EXIT_CHECK_FAILED",
    "EXIT_USAGE",
    "LabException",
    "CheckFailedError",
    "BudgetExceededError",
    "register_exit_code",
    "setup_exit_codes",
    "exit_code_for",
]
