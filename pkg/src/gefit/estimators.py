"""Classical estimators for the GE parameters.

Six methods: maximum likelihood (profile over the rate), method of moments,
percentile, least squares, weighted least squares, and L-moments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gedist import GEParams, ge_cdf, ge_logpdf, ge_quantile
from .optimize import (BracketingError, OptimResult, expand_bracket,
                       minimize_1d, minimize_2d, root_1d)
from .sample import Sample
from .special import polygamma

__all__ = ["FitResult", "FitError", "METHODS",
           "fit_ml", "fit_mm", "fit_pt", "fit_ls", "fit_wls", "fit_lm"]

METHODS = ("ML", "MM", "PT", "LS", "WLS", "LM", "MDPDE")


class FitError(RuntimeError):
    """A fit could not be carried out on the given sample."""


@dataclass
class FitResult:
    method: str
    params: GEParams
    objective_value: float
    optim: OptimResult
    alpha: Optional[float] = None  # present only for MDPDE

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if (self.alpha is not None) != (self.method == "MDPDE"):
            raise ValueError("alpha must be present iff method is MDPDE")


def _prepare(sample: Sample) -> np.ndarray:
    sample.require_min_size(3)
    return sample.values


def _trivial_optim(lam: float, nu: float, value: float) -> OptimResult:
    return OptimResult(argmin=np.array([lam, nu]), objective_value=value,
                       iterations=0, converged=True, tolerance_achieved=0.0)


def fit_ml(sample: Sample) -> FitResult:
    """Profile likelihood: for fixed rate, the shape MLE is available in
    closed form, leaving a 1-D maximization over the rate."""
    x = _prepare(sample)
    if np.ptp(x) == 0.0:
        raise FitError("degenerate sample: all observations equal")
    n, xbar = x.size, x.mean()

    def nu_hat(lam: float) -> float:
        s = np.sum(np.log(-np.expm1(-lam * x)))
        if s == 0.0:  # lam so large that every CDF factor rounds to 1
            return np.inf
        return -n / s

    def profile_negll(lam: float) -> float:
        nu = nu_hat(lam)
        if not (np.isfinite(nu) and nu > 0.0):
            return np.inf
        return -float(np.sum(ge_logpdf(x, GEParams(lam, nu))))

    lo, hi = 0.01 / xbar, 100.0 / xbar
    for _ in range(30):
        res = minimize_1d(profile_negll, (lo, hi), tol=1e-12)
        lam = float(res.argmin[0])
        # expand geometrically if the minimizer sits at a bracket edge
        if lam <= lo * 1.01:
            lo /= 10.0
        elif lam >= hi * 0.99:
            hi *= 10.0
        else:
            break
    if not res.converged:
        raise FitError("profile likelihood maximization failed")
    params = GEParams(lam, nu_hat(lam))
    return FitResult("ML", params, objective_value=res.objective_value / n,
                     optim=res)


def _cv_of_nu(nu: float) -> float:
    num = polygamma(1, 1.0) - polygamma(1, nu + 1.0)
    den = polygamma(0, nu + 1.0) - polygamma(0, 1.0)
    return np.sqrt(num) / den


def fit_mm(sample: Sample) -> FitResult:
    """Moment matching via the coefficient of variation, which is free of
    the rate parameter."""
    x = _prepare(sample)
    xbar, sd = x.mean(), x.std(ddof=1)
    if sd == 0.0:
        raise FitError("degenerate sample: zero standard deviation")
    cv = sd / xbar

    def eqn(nu: float) -> float:
        return _cv_of_nu(nu) - cv

    try:
        lo, hi = expand_bracket(eqn, 0.5, 2.0)
        nu = root_1d(eqn, (lo, hi), tol=1e-12)
    except BracketingError as e:
        raise FitError(f"empirical CV {cv:.4g} is outside the attainable range") from e
    lam = (polygamma(0, nu + 1.0) - polygamma(0, 1.0)) / xbar
    params = GEParams(lam, nu)
    return FitResult("MM", params, objective_value=abs(eqn(nu)),
                     optim=_trivial_optim(lam, nu, abs(eqn(nu))))


def _start_values(x: np.ndarray) -> np.ndarray:
    try:
        mm = fit_mm(Sample(x))
        return mm.params.as_array()
    except FitError:
        return np.array([1.0 / x.mean(), 1.0])


def _fit_quadratic(sample: Sample, method: str, objective) -> FitResult:
    x = _prepare(sample)
    res = minimize_2d(objective, _start_values(x), tol=1e-10)
    params = GEParams(*res.argmin)
    return FitResult(method, params, objective_value=res.objective_value, optim=res)


def fit_pt(sample: Sample) -> FitResult:
    """Percentile fit: least squares of order statistics against model
    quantiles at plotting positions i/(n+1)."""
    xs = np.sort(sample.values)
    n = xs.size
    p = np.arange(1, n + 1) / (n + 1.0)

    def objective(theta: np.ndarray) -> float:
        q = ge_quantile(p, GEParams(*theta))
        return float(np.sum((xs - q) ** 2))

    return _fit_quadratic(sample, "PT", objective)


def _cdf_ls_objective(sample: Sample, weights: np.ndarray):
    xs = np.sort(sample.values)
    n = xs.size
    p = np.arange(1, n + 1) / (n + 1.0)

    def objective(theta: np.ndarray) -> float:
        f = ge_cdf(xs, GEParams(*theta))
        return float(np.sum(weights * (p - f) ** 2))

    return objective


def fit_ls(sample: Sample) -> FitResult:
    n = len(sample)
    return _fit_quadratic(sample, "LS", _cdf_ls_objective(sample, np.ones(n)))


def wls_weights(n: int) -> np.ndarray:
    """Order-statistic weights (n+1)^2 (n+2) / (i (n-i+1)); symmetric in
    i <-> n-i+1 and largest in both tails."""
    i = np.arange(1, n + 1)
    return (n + 1.0) ** 2 * (n + 2.0) / (i * (n - i + 1.0))


def fit_wls(sample: Sample) -> FitResult:
    """Weighted variant of fit_ls with tail-emphasizing weights."""
    w = wls_weights(len(sample))
    return _fit_quadratic(sample, "WLS", _cdf_ls_objective(sample, w))


def fit_lm(sample: Sample) -> FitResult:
    """L-moment fit: the ratio of the two estimating equations is free of
    the rate, leaving a single root-find in the shape."""
    x = _prepare(sample)
    xs = np.sort(x)
    n = xs.size
    t1 = xs.mean()
    t2 = 2.0 * np.sum((np.arange(1, n + 1) - 1) * xs) / (n * (n - 1.0)) - t1
    if t1 <= 0.0:
        raise FitError("nonpositive sample mean")
    r = t2 / t1

    def eqn(nu: float) -> float:
        num = polygamma(0, 2.0 * nu + 1.0) - polygamma(0, nu + 1.0)
        den = polygamma(0, nu + 1.0) - polygamma(0, 1.0)
        return num / den - r

    try:
        lo, hi = expand_bracket(eqn, 0.5, 2.0)
        nu = root_1d(eqn, (lo, hi), tol=1e-12)
    except (BracketingError, ValueError) as e:
        raise FitError(f"sample L-moment ratio {r:.4g} outside attainable range") from e
    lam = (polygamma(0, nu + 1.0) - polygamma(0, 1.0)) / t1
    params = GEParams(lam, nu)
    return FitResult("LM", params, objective_value=abs(eqn(nu)),
                     optim=_trivial_optim(lam, nu, abs(eqn(nu))))
