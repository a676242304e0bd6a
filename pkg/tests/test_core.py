from fractions import Fraction
from pathlib import Path

import pytest
from pydantic import ValidationError

from app.bounds import SweepGrid
from app.core.exceptions import (
    EXIT_CHECK_FAILED,
    EXIT_USAGE,
    BudgetExceededError,
    CheckFailedError,
    exit_code_for,
)
from app.core.rationals import format_rational, is_rational_square, to_fraction
from app.enumeration import NotPositiveDefiniteError
from app.theta import TruncationBudgetExceededError
from qlab_cli.config import ExperimentConfig, hash_options


@pytest.mark.parametrize("value, expected", [
    ("3/4", Fraction(3, 4)), (0.1, Fraction(1, 10)), (-2, Fraction(-2)), (" 5/10 ", Fraction(1, 2)),
])
def test_to_fraction(value, expected):
    assert to_fraction(value) == expected


def test_booleans_are_not_rationals():
    with pytest.raises(TypeError):
        to_fraction(True)


def test_format_rational():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 4)) == "-3/4"


def test_rational_squares():
    assert is_rational_square(Fraction(9, 4))
    assert is_rational_square(Fraction(0))
    assert not is_rational_square(Fraction(-1))
    assert not is_rational_square(Fraction(2))


@pytest.mark.parametrize("exc, code", [
    (CheckFailedError("lemma", "off"), EXIT_CHECK_FAILED),
    (BudgetExceededError("enumeration", 10.0, 1.0), EXIT_CHECK_FAILED),
    (TruncationBudgetExceededError(10.0, 1.0), EXIT_CHECK_FAILED),
    (NotPositiveDefiniteError(3), EXIT_USAGE),
    (ValueError("bad"), EXIT_USAGE),
    (ZeroDivisionError("zero"), EXIT_CHECK_FAILED),
])
def test_exit_codes(exc, code):
    assert exit_code_for(exc) == code


def test_config_hash_ignores_key_order():
    a = ExperimentConfig.model_validate({"name": "x", "grid": {"N": [1, 2], "T": [1.0]}})
    b = ExperimentConfig.model_validate({"grid": {"T": [1.0], "N": [1, 2]}, "name": "x"})
    assert a.config_hash() == b.config_hash()
    assert a.config_hash() != ExperimentConfig(name="y").config_hash()
    assert hash_options({"a": 1, "b": 2}) == hash_options({"b": 2, "a": 1})


def test_config_rejects_empty_axes():
    with pytest.raises(ValidationError):
        ExperimentConfig(grid=SweepGrid(N=[]))


def test_shipped_acceptance_config():
    path = Path(__file__).resolve().parents[1] / "configs" / "acceptance.json"
    config = ExperimentConfig.load(path)
    assert config.grid.delta == [1.0, 0.1, 0.01]
    assert config.grid.T == [0.5, 1.0, 2.0, 4.0, 8.0]
    assert config.grid.level_points == [(0.5, 1.0)]
    assert config.grid.ell is None
    assert config.grid.n == []
    assert config.calibration_constant == 64
    assert config.minimum_constant == 0.25
