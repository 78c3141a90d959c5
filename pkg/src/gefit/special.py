"""Special functions used by the closed-form expressions.

Thin validated wrappers around scipy.special. Every closed-form quantity in
this package reduces to polygamma functions of orders 0-2 and the (log-)beta
function, so these are the only entry points the rest of the code uses.
"""

from __future__ import annotations

import numpy as np
import scipy.special as sc

__all__ = ["polygamma", "log_beta", "beta"]

_VALID_ORDERS = (0, 1, 2)


def polygamma(order: int, x: float) -> float:
    """Polygamma function of order 0 (digamma), 1 (trigamma) or 2.

    Raises ValueError for orders outside {0, 1, 2} or non-positive x.
    """
    if order not in _VALID_ORDERS:
        raise ValueError(f"polygamma order must be in {_VALID_ORDERS}, got {order}")
    x = float(x)
    if not np.isfinite(x) or x <= 0.0:
        raise ValueError(f"polygamma argument must be positive and finite, got {x}")
    if order == 0:
        return float(sc.digamma(x))
    return float(sc.polygamma(order, x))


def _check_positive(a: float, b: float, name: str) -> tuple[float, float]:
    a, b = float(a), float(b)
    if not (np.isfinite(a) and a > 0.0 and np.isfinite(b) and b > 0.0):
        raise ValueError(f"{name} arguments must be positive and finite, got ({a}, {b})")
    return a, b


def log_beta(a: float, b: float) -> float:
    """log B(a, b) for positive a, b."""
    a, b = _check_positive(a, b, "log_beta")
    return float(sc.betaln(a, b))


def beta(a: float, b: float) -> float:
    """B(a, b) for positive a, b."""
    a, b = _check_positive(a, b, "beta")
    return float(np.exp(sc.betaln(a, b)))
