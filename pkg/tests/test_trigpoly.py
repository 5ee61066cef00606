import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sweepout_lab.trigpoly import (TrigPoly, c_norm, circle_distance, ord as trig_ord, unit_circle_zeros,
                                   verify_perturbed_bound, zero_sum)

coeffs = st.lists(st.floats(-2, 2, allow_nan=False), min_size=2, max_size=6).filter(lambda b: abs(b[-1]) > 0.05)


def sign_changes(T, n=20000):
    """Oracle: count simple zeros by dense sign sampling."""
    x = np.linspace(0, 2 * math.pi, n, endpoint=False)
    y = T(x)
    return int(np.sum(np.sign(y) != np.sign(np.roll(y, -1))))


@given(coeffs, st.data())
def test_ord_at_most_twice_degree(b, data):
    th = data.draw(st.lists(st.floats(0, 6.28), min_size=len(b) - 1, max_size=len(b) - 1))
    T = TrigPoly(b, th)
    assert trig_ord(T) <= 2 * T.k


@given(coeffs, st.data())
def test_ord_at_least_sign_changes(b, data):
    th = data.draw(st.lists(st.floats(0, 6.28), min_size=len(b) - 1, max_size=len(b) - 1))
    T = TrigPoly(b, th)
    # every sign change of the sampled function is a zero
    assert trig_ord(T) >= sign_changes(T)


def test_known_orders():
    assert trig_ord(TrigPoly([0, 1])) == 2                      # cos
    assert trig_ord(TrigPoly([1, 1])) == 2                      # 1 + cos has a double zero at pi
    assert trig_ord(TrigPoly([2, 1])) == 0
    assert trig_ord(TrigPoly([0, 0, 1], [0, 0.3])) == 4         # cos(2a + 0.3)
    zs = unit_circle_zeros(TrigPoly([1, 1]))
    assert len(zs) == 1 and zs[0][1] == 2 and circle_distance(zs[0][0], math.pi) < 1e-6


@given(st.integers(1, 5), st.floats(0, 6.28), st.floats(0.5, 2))
def test_zero_sum_of_pure_harmonic(k, theta, amp):
    T = TrigPoly([0.0] * k + [amp], [0.0] * (k - 1) + [theta])
    assert trig_ord(T) == 2 * k
    assert circle_distance(zero_sum(T), -2 * theta) < 1e-6


def test_zero_sum_with_lower_terms(rng):
    hits = 0
    for _ in range(200):
        k = int(rng.integers(1, 6))
        b = rng.normal(size=k + 1) * np.r_[np.full(k, 0.2), 1.0]
        T = TrigPoly(b, rng.uniform(0, 2 * math.pi, size=k))
        if trig_ord(T) == 2 * k:
            hits += 1
            assert circle_distance(zero_sum(T), -2 * T.theta[-1]) < 1e-6
    assert hits > 50


def test_zero_polynomial_and_validation():
    assert TrigPoly([0.0]).is_zero and TrigPoly([1, 0, 0]).k == 0
    with pytest.raises(ValueError):
        TrigPoly([1, 2], [0, 1])


def test_c_norm_and_perturbation():
    T = TrigPoly([0, 1])
    assert c_norm(T, 2) == pytest.approx(1.0, rel=1e-6)
    rep = verify_perturbed_bound(lambda a: T(a) + 1e-9 * np.sin(a), T, 1e-8)
    assert rep.ord_ok and rep.zsum_ok and rep.ord_f == 2 and rep.within_hypothesis
