"""Closed-form asymptotics of the divergence-based estimator.

Builds the weighted information matrix J, the variability matrix
K = J_{2a} - xi xi', the sandwich covariance Sigma = J^-1 K J^-1 of the
sqrt(n)-rescaled estimator, asymptotic relative efficiencies against
maximum likelihood, and the influence function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Union

import numpy as np
from scipy.integrate import quad

from .gedist import GEParams, ge_quantile
from .mdpde import (_check_alpha, _quad_upper, closed_form_valid,
                    density_power, score_vector, xi_integral)
from .special import beta, polygamma

__all__ = [
    "AsympCov", "InfluenceCurve", "NumericalError",
    "xi_vector", "j_matrix", "sandwich_sigma", "are",
    "influence_function", "influence_curve",
]

Floats = Union[float, np.ndarray]

# the J^(1,1) closed form has a removable singularity on this line
_SINGULARITY_TOL = 1e-6


class NumericalError(RuntimeError):
    """An asymptotic quantity could not be computed reliably."""


@dataclass
class AsympCov:
    J: np.ndarray
    K: np.ndarray
    xi: np.ndarray
    Sigma: np.ndarray


@dataclass
class InfluenceCurve:
    xs: np.ndarray
    if_lambda: np.ndarray
    if_nu: np.ndarray
    alpha: float


def xi_vector(params: GEParams, alpha: float) -> np.ndarray:
    """Mean of the score under the f^(1+alpha)-weighted measure; exactly
    (0, 0) at alpha = 0."""
    return xi_integral(params, alpha)


def _j_closed_form_valid(params: GEParams, alpha: float) -> bool:
    nu = params.nu
    if nu <= 1.0:
        return False
    denom = (nu - 1.0) * (1.0 + alpha) - 1.0
    return abs(denom) >= _SINGULARITY_TOL


def _j_quadrature(params: GEParams, alpha: float) -> np.ndarray:
    upper = _quad_upper(params)
    J = np.empty((2, 2))
    for i in range(2):
        for j in range(i, 2):
            val, _ = quad(
                lambda x: (score_vector(x, params)[i] * score_vector(x, params)[j]
                           * density_power(x, params, 1.0 + alpha)),
                0.0, upper, limit=200)
            J[i, j] = J[j, i] = val
    return J


def j_matrix(params: GEParams, alpha: float) -> np.ndarray:
    """Weighted information matrix: integral of u u' f^(1+alpha).

    Closed form (polygamma/beta expressions) requires nu > 1 and stays away
    from the removable singularity nu = (2+alpha)/(1+alpha); quadrature
    otherwise.
    """
    a = _check_alpha(alpha)
    if not closed_form_valid(params, a):
        # the integrand ~ x^((1+a)(nu-1)) near zero: not integrable
        raise NumericalError(
            f"weighted information integral diverges for shape {params.nu} "
            f"<= alpha/(1+alpha) = {a / (1.0 + a)}")
    if not _j_closed_form_valid(params, a):
        return _j_quadrature(params, a)
    lam, nu = params.lam, params.nu
    B = beta(1.0 + a, (1.0 + a) * (nu - 1.0) + 1.0)
    pA = polygamma(0, 1.0 + a)
    p2 = polygamma(0, 2.0 + a)
    p3 = polygamma(0, 3.0 + a)
    pN = polygamma(0, nu * (1.0 + a) + 1.0)
    pm1 = polygamma(0, (1.0 + a) * (nu - 1.0) + 1.0)
    pm0 = polygamma(0, (1.0 + a) * (nu - 1.0))
    tA = polygamma(1, 1.0 + a)
    t2 = polygamma(1, 2.0 + a)
    t3 = polygamma(1, 3.0 + a)
    tN = polygamma(1, nu * (1.0 + a) + 1.0)
    tm1 = polygamma(1, (1.0 + a) * (nu - 1.0) + 1.0)

    j11 = lam ** (a - 2.0) * nu ** (a + 1.0) * B * (
        tA - tN + (1.0 + pA - pN) ** 2
        - 2.0 * (t2 - tN + p2 - pN + (p2 - pN) ** 2)
        + (nu - 1.0) * (a + 2.0) / ((nu - 1.0) * (1.0 + a) - 1.0)
        * (t3 - tN + (p3 - pN) ** 2))
    j22 = lam ** a * nu ** (a - 1.0) * B * (
        nu ** 2 * (tm1 - tN) + (1.0 + nu * (pm1 - pN)) ** 2)
    j12 = lam ** (a - 1.0) * nu ** a * B * (
        1.0 + pA - p2
        + nu * ((pm1 - pN) * (1.0 + pA - pN) - (p2 - pN) * (pm0 - pN)))
    return np.array([[j11, j12], [j12, j22]])


def _inv2(M: np.ndarray) -> np.ndarray:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    cond = np.linalg.cond(M)
    if det == 0.0 or not np.isfinite(cond) or cond > 1e12:
        raise NumericalError(
            f"information matrix is singular or ill-conditioned (cond={cond:.3g})")
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det


def sandwich_sigma(params: GEParams, alpha: float) -> AsympCov:
    """Asymptotic covariance of the sqrt(n)-rescaled estimator."""
    a = _check_alpha(alpha)
    J = j_matrix(params, a)
    xi = xi_vector(params, a)
    K = j_matrix(params, 2.0 * a) - np.outer(xi, xi)
    Jinv = _inv2(J)
    Sigma = Jinv @ K @ Jinv
    Sigma = 0.5 * (Sigma + Sigma.T)  # symmetrize away roundoff
    return AsympCov(J=J, K=K, xi=xi, Sigma=Sigma)


def are(params: GEParams, alpha: float) -> np.ndarray:
    """Asymptotic relative efficiency of the rate/shape estimators against
    maximum likelihood; (1, 1) at alpha = 0, independent of the rate."""
    a = _check_alpha(alpha)
    s0 = sandwich_sigma(params, 0.0).Sigma
    sa = sandwich_sigma(params, a).Sigma
    return np.array([s0[0, 0] / sa[0, 0], s0[1, 1] / sa[1, 1]])


def influence_function(x: Floats, params: GEParams, alpha: float) -> np.ndarray:
    """Standardized asymptotic bias under point contamination at x.

    J^-1 (u(x) f(x)^alpha - xi); bounded over x iff alpha > 0.
    Returns shape (2,) for scalar x, (2, n) for arrays.
    """
    a = _check_alpha(alpha)
    Jinv = _inv2(j_matrix(params, a))
    xi = xi_vector(params, a)
    u = score_vector(x, params)
    w = density_power(x, params, a)
    centered = u * w - np.reshape(xi, (2,) + (1,) * (u.ndim - 1))
    return Jinv @ centered


def influence_curve(params: GEParams, alpha: float,
                    xs: np.ndarray = None) -> InfluenceCurve:
    """Influence function evaluated on a grid (default spans essentially the
    full support)."""
    if xs is None:
        lo = float(ge_quantile(1e-6, params))
        hi = float(ge_quantile(1.0 - 1e-9, params))
        xs = np.linspace(lo, hi, 400)
    vals = influence_function(xs, params, alpha)
    return InfluenceCurve(xs=np.asarray(xs), if_lambda=vals[0], if_nu=vals[1],
                          alpha=float(alpha))
