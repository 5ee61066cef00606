import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import hyperbola_oracle, saddle_oracle
from sweepout_lab.family import (CENTRAL, HYPERBOLA, SADDLE, CutoffConfig, DiskParam, ProjParam, critical_count,
                                 critical_points, f_profile, phi5_ambient, psi_ambient, psi_chart, zeta)
from sweepout_lab.s3geom import chart_to_ambient


def test_projparam_canonical_form():
    p = ProjParam(0, -2, 0, 0, 0, 0)
    assert p.a == (0.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    assert ProjParam(1, 2, 3, 4, 5, 6) == ProjParam(-2, -4, -6, -8, -10, -12)
    assert ProjParam(1, 0, 0, 0, 0, 0).affine() is None
    with pytest.raises(ValueError):
        ProjParam(0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        DiskParam(1.5)
    with pytest.raises(ValueError):
        CutoffConfig(0.5)


@given(st.floats(-3, 3))
def test_zeta_is_a_smooth_step(t):
    v = float(zeta(t))
    assert 0.0 <= v <= 1.0
    assert float(zeta(t + 0.01)) <= v
    if t <= 0.5:
        assert v == 1.0
    if t >= 1:
        assert v == 0.0


def test_psi_chart_agrees_with_ambient(rng):
    a, z = ProjParam(rng.normal(size=6)), DiskParam(0.7, 1.1)
    x1, x2, al = rng.uniform(-0.6, 0.6, 50), rng.uniform(-0.6, 0.6, 50), rng.uniform(0, 6.28, 50)
    W = chart_to_ambient(x1, x2, al)
    assert np.allclose(psi_chart(a, z, x1, x2, al), psi_ambient(a, z, W), atol=1e-12)


def test_phi5_of_great_sphere_is_a_coordinate(rng):
    W = rng.normal(size=(20, 4))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    vals = phi5_ambient(ProjParam(0, 1, 0, 0, 0, 0), W)
    assert np.allclose(np.abs(vals), np.abs(W[:, 0]))


def test_central_zero_profiles():
    for k in range(8):
        p = f_profile(CENTRAL, DiskParam(1.0, 2 * math.pi * k / 8))
        assert p.total_order == 4 and p.orders == [1, 1, 1, 1]
    assert f_profile(CENTRAL, DiskParam(0.0)).total_order == 6


def test_saddle_origin_matches_oracle():
    # derived by multistart Newton; frozen
    assert saddle_oracle([0, 0, 0]) == 1
    assert critical_count(SADDLE, [0, 0, 0]) == 1


@pytest.mark.parametrize("seed", range(6))
def test_critical_counts_match_oracles(seed):
    rng = np.random.default_rng(seed)
    b = rng.normal(size=3)
    assert critical_count(SADDLE, b) == saddle_oracle(b)
    assert critical_count(HYPERBOLA, b) == hyperbola_oracle(b)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_critical_count_at_most_nine(b):
    assert critical_count(SADDLE, b) <= 9 and critical_count(HYPERBOLA, b) <= 9


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_critical_points_lie_on_surface(b):
    P = critical_points(SADDLE, b)
    assert np.allclose(P[:, 0] * P[:, 1], P[:, 2], atol=1e-6 * max(1, np.abs(P).max(initial=1)) ** 2)
    with pytest.raises(ValueError):
        critical_points("sphere", b)
