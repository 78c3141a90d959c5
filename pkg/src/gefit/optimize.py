"""Derivative-free optimizers shared by every estimator.

1-D bracketed minimization and root finding (Brent), and 2-D Nelder-Mead
run in log-parameter coordinates so searches over the positive quadrant
never touch the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
import scipy.optimize as sopt

__all__ = ["OptimResult", "BracketingError", "minimize_1d", "root_1d", "minimize_2d"]

MAX_ITER = 2000


class BracketingError(ValueError):
    """The supplied bracket does not contain a sign change / minimum."""


@dataclass
class OptimResult:
    argmin: np.ndarray
    objective_value: float
    iterations: int
    converged: bool
    tolerance_achieved: float


class _Guard:
    """Wraps an objective; records non-finite evaluations instead of crashing."""

    def __init__(self, fn: Callable):
        self.fn = fn
        self.bad = False
        self.calls = 0

    def __call__(self, *args):
        self.calls += 1
        v = self.fn(*args)
        if not np.isfinite(v):
            self.bad = True
            return np.inf
        return v


def minimize_1d(objective: Callable[[float], float],
                bracket: Tuple[float, float],
                tol: float = 1e-10) -> OptimResult:
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must be a nondegenerate interval")
    guard = _Guard(objective)
    res = sopt.minimize_scalar(guard, bounds=(lo, hi), method="bounded",
                               options={"xatol": tol, "maxiter": MAX_ITER})
    ok = bool(res.success) and not guard.bad
    return OptimResult(argmin=np.array([res.x]), objective_value=float(res.fun),
                       iterations=int(res.nfev), converged=ok,
                       tolerance_achieved=tol if ok else np.inf)


def root_1d(fn: Callable[[float], float],
            bracket: Tuple[float, float],
            tol: float = 1e-10) -> float:
    lo, hi = float(bracket[0]), float(bracket[1])
    flo, fhi = fn(lo), fn(hi)
    if not (np.isfinite(flo) and np.isfinite(fhi)):
        raise BracketingError("function is not finite at the bracket endpoints")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketingError(f"no sign change over [{lo}, {hi}]")
    return float(sopt.brentq(fn, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                             maxiter=MAX_ITER))


def expand_bracket(fn: Callable[[float], float],
                   lo: float, hi: float,
                   factor: float = 4.0, max_expand: int = 60) -> Tuple[float, float]:
    """Geometrically widen (lo, hi) until fn changes sign over it."""
    flo, fhi = fn(lo), fn(hi)
    for _ in range(max_expand):
        if np.isfinite(flo) and np.isfinite(fhi) and np.sign(flo) != np.sign(fhi):
            return lo, hi
        lo, hi = lo / factor, hi * factor
        flo, fhi = fn(lo), fn(hi)
    raise BracketingError("could not bracket a sign change by geometric expansion")


def minimize_2d(objective: Callable[[np.ndarray], float],
                start: Sequence[float],
                tol: float = 1e-8) -> OptimResult:
    """Nelder-Mead over the open positive quadrant via log coordinates.

    Restarts once from the incumbent; reports converged=False on
    max-iteration exhaustion instead of raising.
    """
    start = np.asarray(start, dtype=float)
    if start.shape != (2,) or np.any(start <= 0.0):
        raise ValueError("start must be a strictly positive 2-vector")
    guard = _Guard(lambda t: objective(np.exp(t)))
    if not np.isfinite(objective(start)):
        raise ValueError("objective is not finite at the start point")

    t0 = np.log(start)
    total_iter = 0
    converged = True
    for _ in range(2):  # initial run + one restart from the incumbent
        res = sopt.minimize(guard, t0, method="Nelder-Mead",
                            options={"xatol": tol, "fatol": tol,
                                     "maxiter": MAX_ITER, "maxfev": 4 * MAX_ITER})
        total_iter += int(res.nit)
        t0 = res.x
        converged = bool(res.success)
    # transient infs only steer the simplex away; fail only on a bad incumbent
    ok = bool(converged and np.isfinite(res.fun))
    return OptimResult(argmin=np.exp(t0), objective_value=float(res.fun),
                       iterations=total_iter, converged=ok,
                       tolerance_achieved=tol if ok else np.inf)
