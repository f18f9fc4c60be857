import numpy as np
import pytest

from relbound.numerics import just_above, survive_prob


def test_survive_prob_basics():
    assert survive_prob(0.0, 100) == 1.0
    assert survive_prob(1.0, 5) == 0.0
    assert survive_prob(0.5, 2) == pytest.approx(0.25, abs=1e-15)


def test_survive_prob_zero_exponent_convention():
    assert survive_prob(1.0, 0) == 1.0
    assert survive_prob(0.3, 0) == 1.0


def test_survive_prob_tiny_p_large_t():
    # 1 - p rounds to 1.0 in float; log1p keeps the decay
    assert survive_prob(1e-17, 10**6) == pytest.approx(np.exp(-1e-11), rel=1e-12)


def test_survive_prob_array():
    out = survive_prob(np.array([0.0, 0.5, 1.0]), 2)
    assert out == pytest.approx([1.0, 0.25, 0.0], abs=1e-15)


def test_just_above_relative_gap():
    assert just_above(0.1) > 0.1
    assert just_above(0.1) == pytest.approx(0.1, rel=1e-11)


def test_just_above_zero_is_absolute():
    assert just_above(0.0) == 1e-12
