import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sweepout_lab.errors import ChartDegenerate
from sweepout_lab.s3geom import (ChartId, ChartPoint, S3Point, from_ambient, geodesic_distance, geodesic_distances,
                                 random_rotation, stereographic, to_ambient, triangle_area)

unit4 = st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3)


@given(unit4, st.sampled_from(list(ChartId)))
def test_chart_round_trip(v, chart):
    p = S3Point(v)
    w = p.array
    pair = w[2:] if chart is ChartId.PRIMARY else w[:2]
    if pair @ pair < 1e-10:
        return
    q = to_ambient(from_ambient(p, chart))
    assert np.allclose(q.array, w, atol=1e-12)


def test_collapsed_circle_raises():
    with pytest.raises(ChartDegenerate):
        from_ambient(S3Point([1, 0, 0, 0]))
    assert from_ambient(S3Point([1, 0, 0, 0]), ChartId.DUAL).alpha == 0.0


def test_point_validation():
    with pytest.raises(ValueError):
        S3Point([0, 0, 0, 0])
    with pytest.raises(ValueError):
        S3Point([1, 1, 0, 0], normalize=False)
    with pytest.raises(ValueError):
        ChartPoint(1.0, 1.0, 0.0)


@given(unit4, unit4)
def test_distance_matches_arccos(u, v):
    p, q = S3Point(u), S3Point(v)
    ref = math.acos(max(-1.0, min(1.0, float(p.array @ q.array))))
    assert abs(geodesic_distance(p, q) - ref) < 1e-7
    assert geodesic_distance(p, q) == pytest.approx(geodesic_distance(q, p), abs=1e-15)


def test_distance_accurate_at_small_scale():
    p = np.array([1.0, 0, 0, 0])
    q = np.array([math.cos(1e-9), math.sin(1e-9), 0, 0])
    assert geodesic_distances(p[None], q[None])[0] == pytest.approx(1e-9, rel=1e-6)


def test_triangle_area_and_rotation(rng):
    R = random_rotation(rng)
    assert np.allclose(R @ R.T, np.eye(4)) and np.linalg.det(R) == pytest.approx(1.0)
    a, b, c = np.eye(4)[:3]
    assert triangle_area(a @ R.T, b @ R.T, c @ R.T) == pytest.approx(math.sqrt(3) / 2)


def test_stereographic_maps_equator_to_unit_sphere(rng):
    W = rng.normal(size=(50, 4))
    W[:, 3] = 0.0
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    X = stereographic(W, [0, 0, 0, 1.0])
    assert np.allclose(np.linalg.norm(X, axis=1), 1.0)


@given(st.integers(0, 2 ** 32 - 1))
def test_stereographic_orientation_is_pole_independent(seed):
    rng = np.random.default_rng(seed)
    R = random_rotation(rng)
    p = np.array([0, 0, 0, 1.0])
    # a positively oriented tetrahedron near -p keeps its handedness from every pole
    T = np.array([[0, 0, 0, -1.0], [0.1, 0, 0, -1], [0, 0.1, 0, -1], [0, 0, 0.1, -1]])
    T /= np.linalg.norm(T, axis=1, keepdims=True)
    vol = lambda X: np.linalg.det(X[1:] - X[0])
    assert np.sign(vol(stereographic(T, p))) == np.sign(vol(stereographic(T @ R.T, R @ p)))
