"""Container for observed univariate data."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

__all__ = ["Sample"]

ArrayLike = Union[Sequence[float], np.ndarray]


@dataclass
class Sample:
    """Positive univariate observations with optional provenance metadata.

    All values must be strictly positive and finite. Order is preserved
    (time-ordered data keeps its ordering; estimators sort internally when
    they need order statistics).
    """

    values: np.ndarray
    label: Optional[str] = None
    period: Optional[str] = None

    def __init__(self, values: ArrayLike, label: Optional[str] = None,
                 period: Optional[str] = None):
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            raise ValueError("sample is empty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite values")
        if np.any(arr <= 0.0):
            raise ValueError("sample values must be strictly positive")
        self.values = arr
        self.label = label
        self.period = period

    def __len__(self) -> int:
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def sorted_values(self) -> np.ndarray:
        return np.sort(self.values)

    def without_index(self, i: int) -> "Sample":
        """Copy of the sample with the i-th stored value removed."""
        return Sample(np.delete(self.values, i), label=self.label, period=self.period)

    def require_min_size(self, k: int) -> None:
        if self.n < k:
            raise ValueError(f"need at least {k} observations, got {self.n}")
