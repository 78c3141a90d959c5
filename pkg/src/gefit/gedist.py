"""The two-parameter generalized exponential distribution GE(lambda, nu).

CDF (1 - exp(-lambda*x))**nu on (0, inf); rate lambda > 0, shape nu > 0.
Reduces to the exponential distribution at nu = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .sample import Sample
from .special import polygamma

__all__ = [
    "GEParams",
    "MomentSummary",
    "ge_pdf",
    "ge_logpdf",
    "ge_cdf",
    "ge_quantile",
    "ge_moments",
    "ge_sample",
]

Floats = Union[float, np.ndarray]


@dataclass(frozen=True)
class GEParams:
    """Rate/shape parameter pair, both strictly positive and finite."""

    lam: float
    nu: float

    def __post_init__(self):
        lam, nu = float(self.lam), float(self.nu)
        if not (np.isfinite(lam) and lam > 0.0):
            raise ValueError(f"rate parameter must be positive and finite, got {lam}")
        if not (np.isfinite(nu) and nu > 0.0):
            raise ValueError(f"shape parameter must be positive and finite, got {nu}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "nu", nu)

    def as_array(self) -> np.ndarray:
        return np.array([self.lam, self.nu])


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    skewness: float


def _check_x(x: Floats) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError("x must be positive and finite")
    return arr


def _log1mexp(y: Floats) -> Floats:
    """log(1 - exp(-y)) for y > 0, stable for both small and large y."""
    y = np.asarray(y, dtype=float)
    cut = np.log(2.0)
    small = y < cut
    with np.errstate(divide="ignore"):
        out = np.where(small,
                       np.log(-np.expm1(-np.minimum(y, cut))),
                       np.log1p(-np.exp(-np.maximum(y, cut))))
    return out


def ge_logpdf(x: Floats, params: GEParams) -> Floats:
    x = _check_x(x)
    lam, nu = params.lam, params.nu
    y = lam * x
    out = np.log(lam * nu) - y + (nu - 1.0) * _log1mexp(y)
    return out if out.ndim else float(out)


def ge_pdf(x: Floats, params: GEParams) -> Floats:
    """Density lam*nu*exp(-lam*x)*(1-exp(-lam*x))**(nu-1).

    Underflow for very large lam*x yields exactly 0 rather than NaN.
    """
    x = _check_x(x)
    lam, nu = params.lam, params.nu
    y = lam * x
    om = -np.expm1(-y)  # 1 - exp(-lam x), no cancellation for small y
    with np.errstate(over="ignore"):
        out = lam * nu * np.exp(-y) * om ** (nu - 1.0)
    out = np.where(y > 700.0, 0.0, out)
    return out if out.ndim else float(out)


def ge_cdf(x: Floats, params: GEParams) -> Floats:
    x = _check_x(x)
    out = np.exp(params.nu * _log1mexp(params.lam * x))
    return out if out.ndim else float(out)


def ge_quantile(p: Floats, params: GEParams) -> Floats:
    """Inverse CDF: -log(1 - p**(1/nu)) / lam for p in (0, 1)."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0) or np.any(p >= 1.0) or not np.all(np.isfinite(p)):
        raise ValueError("p must lie strictly inside (0, 1)")
    t = np.log(p) / params.nu       # log of p**(1/nu), <= 0
    # 1 - p**(1/nu) = -expm1(t); take log stably via _log1mexp(-t)
    out = -_log1mexp(-t) / params.lam
    return out if out.ndim else float(out)


def ge_moments(params: GEParams) -> MomentSummary:
    """Mean, variance and skewness via polygamma identities.

    Skewness does not depend on the rate parameter.
    """
    lam, nu = params.lam, params.nu
    d = polygamma(0, nu + 1.0) - polygamma(0, 1.0)
    t = polygamma(1, 1.0) - polygamma(1, nu + 1.0)
    q = polygamma(2, nu + 1.0) - polygamma(2, 1.0)
    return MomentSummary(mean=d / lam, variance=t / lam**2, skewness=q / t**1.5)


def ge_sample(n: int, params: GEParams, seed: int) -> Sample:
    """n independent inverse-CDF draws; deterministic given the seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.uniform(size=n)
    # keep u strictly inside (0, 1); p=0 has probability zero but guard anyway
    u = np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).epsneg)
    return Sample(ge_quantile(u, params))
