"""
Basis reduction for lattices of rank at most 4.

LLL on the Gram matrix of a quadratic form, followed by a greedy pass that
replaces vᵢ by vᵢ ± vⱼ while that lowers an arbitrary gauge.
"""
from typing import Callable, Tuple

import numpy as np

from .exceptions import ReductionDidNotConvergeError


def gram_schmidt(gram: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients μ and squared lengths |b*ᵢ|² from a Gram matrix."""
    n = gram.shape[0]
    mu = np.zeros((n, n))
    bstar = np.zeros(n)
    for i in range(n):
        for j in range(i):
            mu[i, j] = (gram[i, j] - np.sum(mu[j, :j] * mu[i, :j] * bstar[:j])) / bstar[j]
        bstar[i] = gram[i, i] - np.sum(mu[i, :i] ** 2 * bstar[:i])
    return mu, bstar


def lll_reduce(gram: np.ndarray, delta: float = 0.99, max_iter: int = 100000) -> np.ndarray:
    """
    LLL-reduce the standard basis with respect to a positive-definite Gram.

    Args:
        gram: n×n Gram matrix in lattice coordinates
        delta: Lovász parameter

    Returns:
        np.ndarray: unimodular integer matrix H whose rows are the reduced basis
    """
    n = gram.shape[0]
    H = np.eye(n, dtype=np.int64)
    k = 1
    for _ in range(max_iter):
        if k >= n:
            return H
        mu, bstar = gram_schmidt(H @ gram @ H.T)
        for j in range(k - 1, -1, -1):
            q = int(round(mu[k, j]))
            if q:
                H[k] -= q * H[j]
                mu, bstar = gram_schmidt(H @ gram @ H.T)
        if bstar[k] >= (delta - mu[k, k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            H[[k - 1, k]] = H[[k, k - 1]]
            k = max(k - 1, 1)
    raise ReductionDidNotConvergeError(max_iter)


def greedy_improve(H: np.ndarray, gauge: Callable[[np.ndarray], np.ndarray],
                   max_rounds: int = 1000) -> np.ndarray:
    """Replace rows by row ± other row while that strictly lowers the gauge; sort ascending."""
    H = H.copy()
    n = H.shape[0]
    for _ in range(max_rounds):
        changed = False
        for i in range(n):
            current = gauge(H[i])[0]
            for j in range(n):
                if i == j:
                    continue
                for sign in (1, -1):
                    candidate = H[i] + sign * H[j]
                    value = gauge(candidate)[0]
                    if value < current * (1 - 1e-12):
                        H[i], current, changed = candidate, value, True
        if not changed:
            break
    order = np.argsort(gauge(H), kind="stable")
    return H[order]
