"""Input-oriented radial DEA: envelopment programs, efficiency decomposition,
returns-to-scale classification.

Each unit is scored by the smallest factor theta to which all of its inputs
can be contracted while a non-negative combination of peer units still
covers its outputs. Constant-returns (overall) and variable-returns (pure
technical) scores are combined into scale efficiency, and returns to scale
are classified from the range of the intensity-weight sum over the
constant-returns optimal set.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import Dataset
from .lp import EQ, GE, LE, LpError, LpProblem, LpStatus, solve_lp

__all__ = [
    "DeaOptions",
    "DomainError",
    "EfficiencyResult",
    "FrontierReport",
    "Rts",
    "RtsClass",
    "SolverFailure",
    "build_envelopment_lp",
    "classify_rts",
    "efficiency",
    "run_frontier",
    "scale_efficiency",
]


class Rts(Enum):
    CRS = "crs"
    VRS = "vrs"


class RtsClass(Enum):
    CONSTANT = "Constant"
    INCREASING = "Increasing"
    DECREASING = "Decreasing"


class SolverFailure(Exception):
    """The LP stage failed for one unit; carries the offending id."""

    def __init__(self, dmu_id: str, detail: str):
        super().__init__(f"unit {dmu_id!r}: {detail}")
        self.dmu_id = dmu_id


class DomainError(Exception):
    """Inconsistent upstream scores (overall above pure technical)."""


@dataclass(frozen=True)
class DeaOptions:
    returns_to_scale: Rts = Rts.CRS
    efficiency_tol: float = 1e-6
    rts_tol: float = 1e-6

    def __post_init__(self):
        for tol in (self.efficiency_tol, self.rts_tol):
            if not 0.0 < tol < 1e-2:
                raise ValueError("tolerances must lie in (0, 1e-2)")


@dataclass(frozen=True)
class EfficiencyResult:
    """Decomposed scores for one unit.

    Scores within efficiency_tol of 1 are snapped to exactly 1.0 so that
    efficient units are recognizable downstream (reports, censoring).
    """

    dmu_id: str
    ote: float
    pte: float
    se: float
    rts: RtsClass
    lambda_crs: np.ndarray
    lambda_sum_range: tuple[float, float]


@dataclass(frozen=True)
class FrontierReport:
    results: tuple[EfficiencyResult, ...]
    efficient_crs: int
    efficient_vrs: int
    mean_ote: float
    mean_pte: float


def build_envelopment_lp(ds: Dataset, j: int, opts: DeaOptions) -> LpProblem:
    """Envelopment program for unit j: variables (theta, lambda_1..n).

    Rows: theta * x_ij - sum_k lambda_k x_ik >= 0 for each input i,
    sum_k lambda_k y_ok >= y_oj for each output o, plus the convexity row
    sum lambda = 1 under variable returns. The evaluated unit stays in its
    own reference set. theta's optimum lies in (0, 1], so the canonical
    x >= 0 bound never binds away the solution.
    """
    X = ds.input_matrix
    Y = ds.output_matrix
    n, m = X.shape
    s = Y.shape[1]
    vrs = opts.returns_to_scale is Rts.VRS

    rows = m + s + (1 if vrs else 0)
    A = np.zeros((rows, 1 + n))
    b = np.zeros(rows)
    relations: list[str] = []
    for i in range(m):
        A[i, 0] = X[j, i]
        A[i, 1:] = -X[:, i]
        relations.append(GE)
    for o in range(s):
        A[m + o, 1:] = Y[:, o]
        b[m + o] = Y[j, o]
        relations.append(GE)
    if vrs:
        A[m + s, 1:] = 1.0
        b[m + s] = 1.0
        relations.append(EQ)

    c = np.zeros(1 + n)
    c[0] = 1.0
    return LpProblem(c=c, A=A, relations=tuple(relations), b=b)


def _solve_envelopment(ds: Dataset, j: int, opts: DeaOptions) -> tuple[float, np.ndarray]:
    problem = build_envelopment_lp(ds, j, opts)
    try:
        sol = solve_lp(problem)
    except LpError as err:
        raise SolverFailure(ds.dmus[j].id, str(err)) from err
    if sol.status is not LpStatus.OPTIMAL:
        raise SolverFailure(ds.dmus[j].id, f"envelopment LP ended {sol.status.value}")
    return float(sol.objective_value), sol.x[1:].copy()


def efficiency(ds: Dataset, j: int, opts: DeaOptions) -> float:
    """Optimal radial contraction factor for unit j under opts' returns
    assumption. Values within efficiency_tol of 1 mean the unit is
    efficient."""
    theta, _ = _solve_envelopment(ds, j, opts)
    return theta


def scale_efficiency(ote: float, pte: float, efficiency_tol: float = 1e-6) -> float:
    """ote / pte, clamped into (0, 1].

    Raises DomainError when ote exceeds pte beyond tolerance, which
    signals inconsistent upstream solves rather than a property of the
    data.
    """
    if ote > pte * (1.0 + efficiency_tol) + efficiency_tol:
        raise DomainError(f"overall score {ote} exceeds pure technical score {pte}")
    ratio = ote / pte
    return min(ratio, 1.0)


def _lambda_sum_range(
    ds: Dataset, j: int, theta: float, opts: DeaOptions
) -> tuple[float, float]:
    """Min and max of sum(lambda) over the CRS optimal set at theta.

    The contracted-input rows get a one-part-per-billion cushion so the
    solved optimum stays feasible under floating point; rts_tol dwarfs it.
    """
    X = ds.input_matrix
    Y = ds.output_matrix
    n, m = X.shape
    s = Y.shape[1]

    A = np.zeros((m + s, n))
    b = np.zeros(m + s)
    relations: list[str] = []
    for i in range(m):
        A[i] = X[:, i]
        b[i] = theta * X[j, i] * (1.0 + 1e-9)
        relations.append(LE)
    for o in range(s):
        A[m + o] = Y[:, o]
        b[m + o] = Y[j, o]
        relations.append(GE)

    ones = np.ones(n)
    bounds = []
    for c in (ones, -ones):
        try:
            sol = solve_lp(LpProblem(c=c, A=A, relations=tuple(relations), b=b))
        except LpError as err:
            raise SolverFailure(ds.dmus[j].id, str(err)) from err
        if sol.status is not LpStatus.OPTIMAL:
            raise SolverFailure(ds.dmus[j].id, f"intensity-sum LP ended {sol.status.value}")
        bounds.append(float(sol.objective_value))
    return bounds[0], -bounds[1]


def classify_rts(ds: Dataset, j: int, opts: DeaOptions) -> RtsClass:
    """Returns-to-scale class from the intensity-sum range at the CRS
    optimum: constant if the range contains 1 within rts_tol, increasing
    if it lies below 1, decreasing if above."""
    theta, _ = _solve_envelopment(ds, j, DeaOptions(Rts.CRS, opts.efficiency_tol, opts.rts_tol))
    low, high = _lambda_sum_range(ds, j, theta, opts)
    return _rts_from_range(low, high, opts.rts_tol)


def _rts_from_range(low: float, high: float, tol: float) -> RtsClass:
    if high < 1.0 - tol:
        return RtsClass.INCREASING
    if low > 1.0 + tol:
        return RtsClass.DECREASING
    return RtsClass.CONSTANT


def _snap(theta: float, tol: float) -> float:
    return 1.0 if abs(theta - 1.0) <= tol else theta


def _evaluate_dmu(ds: Dataset, j: int, opts: DeaOptions) -> EfficiencyResult:
    crs_opts = DeaOptions(Rts.CRS, opts.efficiency_tol, opts.rts_tol)
    vrs_opts = DeaOptions(Rts.VRS, opts.efficiency_tol, opts.rts_tol)
    theta_crs, lam = _solve_envelopment(ds, j, crs_opts)
    theta_vrs, _ = _solve_envelopment(ds, j, vrs_opts)
    ote = _snap(theta_crs, opts.efficiency_tol)
    pte = _snap(theta_vrs, opts.efficiency_tol)
    se = scale_efficiency(ote, pte, opts.efficiency_tol)
    low, high = _lambda_sum_range(ds, j, theta_crs, opts)
    return EfficiencyResult(
        dmu_id=ds.dmus[j].id,
        ote=ote,
        pte=pte,
        se=se,
        rts=_rts_from_range(low, high, opts.rts_tol),
        lambda_crs=lam,
        lambda_sum_range=(low, high),
    )


def run_frontier(ds: Dataset, opts: DeaOptions, max_workers: int | None = None) -> FrontierReport:
    """Score every unit under both returns assumptions.

    Units may be evaluated concurrently (max_workers > 1); results are
    merged in dataset order either way. Emits a warning when the dataset
    fails the discriminatory-power rules of thumb.
    """
    if not ds.weak_rule:
        warnings.warn(
            f"dataset has n={ds.n} < m+s={ds.m + ds.s}; scores will discriminate poorly",
            stacklevel=2,
        )
    elif not ds.strong_rule:
        warnings.warn(
            f"dataset has n={ds.n} <= 3(m+s)={3 * (ds.m + ds.s)}; "
            "many units may score as efficient",
            stacklevel=2,
        )

    if max_workers is None:
        max_workers = int(os.environ.get("EFFX_THREADS", "1") or "1")
    indices = range(ds.n)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = tuple(pool.map(lambda j: _evaluate_dmu(ds, j, opts), indices))
    else:
        results = tuple(_evaluate_dmu(ds, j, opts) for j in indices)

    return FrontierReport(
        results=results,
        efficient_crs=sum(1 for r in results if r.ote == 1.0),
        efficient_vrs=sum(1 for r in results if r.pte == 1.0),
        mean_ote=float(np.mean([r.ote for r in results])),
        mean_pte=float(np.mean([r.pte for r in results])),
    )
