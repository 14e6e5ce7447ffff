"""Shared numerical kernels: Gaussian densities, SPD solves, derivatives, chi-square tails.

Dense matrices and vectors are plain ``numpy.ndarray`` objects throughout.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy import special
from scipy.linalg import solve_triangular

__all__ = [
    "NonFiniteEvaluation",
    "NotPositiveDefinite",
    "PD_TOL",
    "chi_square_sf",
    "fd_gradient",
    "log_normal_cdf",
    "log_normal_pdf",
    "normal_cdf",
    "normal_pdf",
    "solve_spd",
]

_LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)
_SQRT_2 = np.sqrt(2.0)

PD_TOL = 1e-12
_SYM_TOL = 1e-10


class NotPositiveDefinite(Exception):
    """Symmetric factorization met a pivot at or below the tolerance."""


class NonFiniteEvaluation(Exception):
    """A function evaluation returned NaN or infinity."""


def normal_pdf(z):
    """Standard normal density phi(z). Accepts scalars or arrays."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z * z - _LOG_SQRT_2PI)
    return float(out) if out.ndim == 0 else out


def log_normal_pdf(z):
    """log phi(z), safe for large |z|."""
    z = np.asarray(z, dtype=float)
    out = -0.5 * z * z - _LOG_SQRT_2PI
    return float(out) if out.ndim == 0 else out


def normal_cdf(z):
    """Standard normal CDF Phi(z) via the complementary error function.

    Computed from the tail mass of |z| so that Phi(z) + Phi(-z) sums to
    exactly 1.0 in floating point.
    """
    z = np.asarray(z, dtype=float)
    tail = 0.5 * special.erfc(np.abs(z) / _SQRT_2)
    out = np.where(z < 0.0, tail, 1.0 - tail)
    return float(out) if out.ndim == 0 else out


def log_normal_cdf(z):
    """log Phi(z) without underflow; usable far into the left tail."""
    z = np.asarray(z, dtype=float)
    out = special.log_ndtr(z)
    return float(out) if out.ndim == 0 else out


def solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for symmetric positive definite A via Cholesky.

    ``b`` may be a vector or a matrix of stacked right-hand sides.

    Raises:
        ValueError: A is not square or not symmetric within 1e-10.
        NotPositiveDefinite: factorization failed or a pivot fell at or
            below PD_TOL relative to the diagonal scale.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.abs(A).max()))
    if float(np.abs(A - A.T).max()) > _SYM_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    try:
        L = np.linalg.cholesky(0.5 * (A + A.T))
    except np.linalg.LinAlgError as err:
        raise NotPositiveDefinite(str(err)) from err
    diag_floor = PD_TOL * max(1.0, float(np.abs(np.diag(A)).max()))
    if float(np.min(np.diag(L)) ** 2) <= diag_floor:
        raise NotPositiveDefinite("pivot at or below pd_tol")
    y = solve_triangular(L, b, lower=True)
    return solve_triangular(L.T, y, lower=False)


def fd_gradient(f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function of k reals."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        hi = float(f(x + step))
        lo = float(f(x - step))
        if not (np.isfinite(hi) and np.isfinite(lo)):
            raise NonFiniteEvaluation(f"non-finite evaluation near coordinate {i}")
        grad[i] = (hi - lo) / (2.0 * h)
    return grad


def chi_square_sf(x: float, df: int) -> float:
    """Upper-tail probability P(X >= x) for X ~ chi-square with df degrees."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if df < 1 or int(df) != df:
        raise ValueError("df must be a positive integer")
    return float(special.gammaincc(df / 2.0, x / 2.0))
