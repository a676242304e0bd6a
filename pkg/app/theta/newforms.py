from functools import lru_cache
from math import pi
from typing import Callable, List, Optional

import numpy as np

from app.core.logging import get_logger
from app.core.settings import settings
from .exceptions import InvalidNewformDataError, TailBudgetExceededError
from .schemas import NewformData

# Configure logging
logger = get_logger(__name__)

TAIL_TERMS = 4000


def _truncated_product(a: List[int], b: List[int], n: int) -> List[int]:
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j, bj in enumerate(b[:n - i]):
                out[i + j] += ai * bj
    return out


def _truncated_power(a: List[int], exponent: int, n: int) -> List[int]:
    result = [1] + [0] * (n - 1)
    base = list(a)
    while exponent:
        if exponent & 1:
            result = _truncated_product(result, base, n)
        exponent >>= 1
        if exponent:
            base = _truncated_product(base, base, n)
    return result


@lru_cache(maxsize=16)
def _tail_bound(k: int, n_max: int, y: float) -> float:
    """
    Bound on y^{k/2} Σ_{n > n_max} |a_n| e^{−2πny} from |a_n| ≤ 2n^{k/2}.

    The last ratio of consecutive terms bounds the remainder geometrically;
    infinity when the terms are still growing.
    """
    n = np.arange(n_max + 1, n_max + 1 + TAIL_TERMS, dtype=float)
    log_terms = np.log(2.0) + (k / 2) * np.log(n) - 2 * pi * n * y
    terms = np.exp(log_terms)
    ratio = float(np.exp(log_terms[-1] - log_terms[-2]))
    if ratio >= 1:
        return float("inf")
    total = float(terms.sum()) + float(terms[-1]) * ratio / (1 - ratio)
    return y ** (k / 2) * total


class NewformService:
    """Holomorphic newforms from q-expansions, evaluated as y^{k/2} f(z)."""

    @staticmethod
    def delta_qexp(n_max: int = 60) -> NewformData:
        """
        Δ = q ∏(1 − qⁿ)²⁴ to n_max coefficients.

        ∏(1 − qⁿ) comes from the pentagonal number theorem; the 24th power
        is exact integer arithmetic.
        """
        if n_max < 1:
            raise InvalidNewformDataError(f"n_max={n_max} must be at least 1")
        euler = [0] * n_max
        for j in range(-n_max, n_max + 1):
            exponent = j * (3 * j - 1) // 2
            if 0 <= exponent < n_max:
                euler[exponent] += -1 if j % 2 else 1
        coeffs = _truncated_power(euler, 24, n_max)
        logger.debug(f"Δ q-expansion to {n_max} terms")
        return NewformData(k=12, N=1, coeffs=coeffs, source="delta-product")

    @staticmethod
    def tail_bound(f: NewformData, y: float) -> float:
        return _tail_bound(f.k, f.n_max, float(y))

    @staticmethod
    def as_function(f: NewformData, y_min: float,
                    accuracy: Optional[float] = None) -> Callable[[np.ndarray], np.ndarray]:
        """
        s ↦ Im(s)^{k/2} f(s), valid for Im s ≥ y_min.

        Raises:
            TailBudgetExceededError: the coefficient tail at y_min is above accuracy
        """
        accuracy = settings.THETA_ACCURACY if accuracy is None else accuracy
        tail = NewformService.tail_bound(f, y_min)
        if tail > accuracy:
            raise TailBudgetExceededError(tail, accuracy)
        n = np.arange(1, f.n_max + 1, dtype=float)
        a = np.array([float(c) for c in f.coeffs])

        def evaluate(s) -> np.ndarray:
            s = np.asarray(s, dtype=complex)
            flat = s.ravel()
            q_powers = np.exp(2j * pi * flat[:, None] * n[None, :])
            values = flat.imag ** (f.k / 2) * (q_powers @ a)
            return values.reshape(s.shape)

        return evaluate

    @staticmethod
    def newform_eval(f: NewformData, z: complex, accuracy: Optional[float] = None) -> complex:
        """
        Im(z)^{k/2} f(z) from the stored coefficients.

        Args:
            f: newform data
            z: point of the upper half plane
            accuracy: allowed tail (defaults to THETA_ACCURACY)

        Returns:
            complex: the weight-k unitary value
        """
        z = complex(z)
        if not z.imag > 0:
            raise InvalidNewformDataError(f"evaluation point {z} is not in the upper half plane")
        return complex(NewformService.as_function(f, z.imag, accuracy)(np.array([z]))[0])
