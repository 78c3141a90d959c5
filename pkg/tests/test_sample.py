import numpy as np
import pytest

from gefit.sample import Sample


def test_construction_and_metadata():
    s = Sample([3.0, 1.0, 2.0], label="july", period="monthly")
    assert len(s) == 3 and s.n == 3
    assert s.label == "july" and s.period == "monthly"
    # original order preserved; sorted view separate
    assert s.values.tolist() == [3.0, 1.0, 2.0]
    assert s.sorted_values().tolist() == [1.0, 2.0, 3.0]


def test_validation():
    with pytest.raises(ValueError):
        Sample([])
    with pytest.raises(ValueError):
        Sample([1.0, 0.0])
    with pytest.raises(ValueError):
        Sample([1.0, -2.0])
    with pytest.raises(ValueError):
        Sample([1.0, np.nan])
    with pytest.raises(ValueError):
        Sample([1.0, np.inf])


def test_without_index():
    s = Sample([1.0, 2.0, 3.0], label="x")
    r = s.without_index(1)
    assert r.values.tolist() == [1.0, 3.0]
    assert r.label == "x"
    assert s.n == 3  # original untouched


def test_require_min_size():
    s = Sample([1.0, 2.0])
    s.require_min_size(2)
    with pytest.raises(ValueError):
        s.require_min_size(3)
