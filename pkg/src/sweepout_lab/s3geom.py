"""Coordinates, charts and elementary metric geometry of the unit 3-sphere.

Points of S^3 are stored by their ambient coordinates ``w = (x1, x2, x3, x4)``.
The solid-torus chart ``(x1, x2, alpha) -> (x1, x2, s cos alpha, s sin alpha)``
with ``s = sqrt(1 - x1^2 - x2^2)`` covers S^3 minus the great circle
``C = {x3 = x4 = 0}``; the dual chart swaps the two coordinate pairs and
covers S^3 minus ``C_perp = {x1 = x2 = 0}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartDegenerate

TWO_PI = 2.0 * math.pi
UNIT_TOL = 1e-12
# squared norm of the complementary pair below which a point sits on the collapsed circle
COLLAPSE_TOL = 1e-14


class ChartId(enum.Enum):
    PRIMARY = "primary"
    DUAL = "dual"


def _as_vec4(w) -> np.ndarray:
    arr = np.asarray(w, dtype=float).reshape(4)
    return arr


@dataclass(frozen=True)
class S3Point:
    """A point of the unit 3-sphere in ambient 4-coordinates."""

    w: tuple

    def __init__(self, w, normalize: bool = True):
        arr = _as_vec4(w)
        n = float(np.linalg.norm(arr))
        if n == 0.0:
            raise ValueError("zero vector is not a point of S^3")
        if normalize:
            arr = arr / n
        elif abs(n * n - 1.0) > UNIT_TOL:
            raise ValueError(f"|w|^2 = {n * n!r} is not 1")
        object.__setattr__(self, "w", tuple(float(x) for x in arr))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.w)

    def __iter__(self):
        return iter(self.w)

    def __getitem__(self, i):
        return self.w[i]


@dataclass(frozen=True)
class ChartPoint:
    """A point ``(x1, x2, alpha)`` of a solid-torus chart.

    For the dual chart the first two fields hold ``(x3, x4)`` and ``alpha``
    is the angle in the ``(x1, x2)`` plane.
    """

    x1: float
    x2: float
    alpha: float
    chart: ChartId = ChartId.PRIMARY

    def __post_init__(self):
        r2 = self.x1 * self.x1 + self.x2 * self.x2
        if r2 > 1.0 + 1e-12:
            raise ValueError(f"x1^2 + x2^2 = {r2} exceeds 1")
        object.__setattr__(self, "alpha", float(self.alpha) % TWO_PI)

    @property
    def sigma(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.x1 * self.x1 - self.x2 * self.x2))


def sigma(x1, x2):
    """The fibre radius ``sqrt(1 - x1^2 - x2^2)``, clipped at zero."""
    return np.sqrt(np.maximum(0.0, 1.0 - np.square(x1) - np.square(x2)))


def chart_to_ambient(x1, x2, alpha) -> np.ndarray:
    """Vectorized primary-chart parametrization; returns an ``(..., 4)`` array."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    s = sigma(x1, x2)
    x1, x2, alpha, s = np.broadcast_arrays(x1, x2, alpha, s)
    return np.stack([x1, x2, s * np.cos(alpha), s * np.sin(alpha)], axis=-1)


def to_ambient(p: ChartPoint) -> S3Point:
    w = chart_to_ambient(p.x1, p.x2, p.alpha)
    if p.chart is ChartId.DUAL:
        w = np.array([w[2], w[3], w[0], w[1]])
    return S3Point(w)


def from_ambient(q: S3Point, chart: ChartId = ChartId.PRIMARY) -> ChartPoint:
    w = q.array if isinstance(q, S3Point) else _as_vec4(q)
    if chart is ChartId.DUAL:
        w = np.array([w[2], w[3], w[0], w[1]])
    if w[2] * w[2] + w[3] * w[3] < COLLAPSE_TOL:
        raise ChartDegenerate(f"{tuple(w)} lies on the collapsed circle of the {chart.value} chart")
    return ChartPoint(float(w[0]), float(w[1]), math.atan2(w[3], w[2]), chart)


def geodesic_distance(p, q) -> float:
    """Great-circle distance ``arccos(p . q)`` in ``[0, pi]``.

    Evaluated as ``2 atan2(|p - q|, |p + q|)``, which equals the arccos form
    for unit vectors but keeps full relative accuracy at tiny distances.
    """
    a = p.array if isinstance(p, S3Point) else np.asarray(p, dtype=float)
    b = q.array if isinstance(q, S3Point) else np.asarray(q, dtype=float)
    return float(2.0 * np.arctan2(np.linalg.norm(a - b), np.linalg.norm(a + b)))


def geodesic_distances(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Row-wise geodesic distance between two ``(n, 4)`` arrays of unit vectors.

    Uses ``2 atan2(|p - q|, |p + q|)``, which stays accurate for the very
    short distances that mesh edges produce.
    """
    P, Q = np.asarray(P), np.asarray(Q)
    return 2.0 * np.arctan2(np.linalg.norm(P - Q, axis=-1), np.linalg.norm(P + Q, axis=-1))


def triangle_area(a, b, c) -> float:
    """Chordal area of the flat triangle ``abc`` in R^4 (Gram determinant)."""
    return float(triangle_areas(np.asarray(a, float)[None], np.asarray(b, float)[None],
                                np.asarray(c, float)[None])[0])


def triangle_areas(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Vectorized chordal triangle areas for ``(n, d)`` vertex arrays."""
    u = B - A
    v = C - A
    uu = np.einsum("ij,ij->i", u, u)
    vv = np.einsum("ij,ij->i", v, v)
    uv = np.einsum("ij,ij->i", u, v)
    return 0.5 * np.sqrt(np.maximum(uu * vv - uv * uv, 0.0))


def normalize_rows(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return X / np.linalg.norm(X, axis=-1, keepdims=True)


def random_rotation(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """Haar-random rotation in SO(dim)."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def stereographic(W: np.ndarray, pole) -> np.ndarray:
    """Stereographic projection of unit vectors ``W`` from ``pole`` to R^3.

    The image is expressed in an orthonormal frame of ``pole``'s orthogonal
    complement, so the map is conformal.  The frame satisfies
    ``det[pole; frame] = 1``, which makes signed quantities such as linking
    numbers independent of the pole.
    """
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    # complete pole to an orthonormal basis; frame rows span its complement
    basis, _ = np.linalg.qr(np.column_stack([pole, np.eye(4)]))
    frame = basis[:, 1:4].T
    # fixed handedness, so that every pole induces the same orientation of R^3
    if np.linalg.det(np.vstack([pole, frame])) < 0:
        frame[0] = -frame[0]
    W =np.atleast_2d(np.asarray(W, dtype=float))
    denom = 1.0 - W @ pole
    return (W @ frame.T) / denom[:, None]
