"""Synthetic test surfaces: spheres, tori, handle chains, a Moebius band."""

from __future__ import annotations

import math

import numpy as np

from .marching import marching_r3
from .mesh import TriSurface, flat_torus, oriented


def icosphere(depth: int = 3, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> TriSurface:
    """Subdivided icosahedron in R^3."""
    t = (1 + 5 ** 0.5) / 2
    V = [[-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0], [0, -1, t], [0, 1, t],
         [0, -1, -t], [0, 1, -t], [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1]]
    F = [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11], [1, 5, 9], [5, 11, 4],
         [11, 10, 2], [10, 7, 6], [7, 1, 8], [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8],
         [3, 8, 9], [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
    V = [np.array(v, float) / np.linalg.norm(v) for v in V]
    for _ in range(depth):
        mid = {}
        newF = []
        for a, b, c in F:
            ids = []
            for u, v in ((a, b), (b, c), (c, a)):
                key = (min(u, v), max(u, v))
                if key not in mid:
                    m = V[u] + V[v]
                    V.append(m / np.linalg.norm(m))
                    mid[key] = len(V) - 1
                ids.append(mid[key])
            ab, bc, ca = ids
            newF += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        F = newF
    X = np.array(V) * radius + np.asarray(center, float)
    return TriSurface(X, np.array(F), on_sphere=False)


def great_sphere_s3(depth: int = 4) -> TriSurface:
    """The great 2-sphere ``{x1 = 0}`` of S^3 as a subdivided icosahedron."""
    ico = icosphere(depth)
    X = np.column_stack([np.zeros(ico.n_vertices), ico.vertices])
    return TriSurface(X, ico.triangles, on_sphere=True)


def torus_r3(R: float = 1.0, r: float = 0.35, m: int = 48, n: int = 16) -> TriSurface:
    """Round torus of revolution about the z axis."""
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    u = 2 * math.pi * i.ravel() / m
    v = 2 * math.pi * j.ravel() / n
    X = np.column_stack([(R + r * np.cos(v)) * np.cos(u), (R + r * np.cos(v)) * np.sin(u), r * np.sin(v)])
    from .mesh import torus_grid
    return TriSurface(X, torus_grid(m, n), on_sphere=False)


def _torus_field(P: np.ndarray, cx: float, R: float, r: float) -> np.ndarray:
    q = np.hypot(P[:, 0] - cx, P[:, 1]) - R
    return q * q + P[:, 2] ** 2 - r * r


def torus_chain(g: int = 3, R: float = 1.0, r: float = 0.3, n: int = 64, scale: float = 1.0) -> TriSurface:
    """Boundary of ``g`` solid tori in a row, neighbours overlapping: a closed genus-``g`` surface."""
    centers = [2 * R * k * 0.9 for k in range(g)]

    def f(P):
        return np.min(np.stack([_torus_field(P, c, R, r) for c in centers]), axis=0)

    pad = r + 0.2
    lo = [-R - pad, -R - pad, -pad]
    hi = [centers[-1] + R + pad, R + pad, pad]
    V, T = marching_r3(f, lo, hi, n)
    S = TriSurface(V * scale, T, on_sphere=False)
    return oriented(S)


def dumbbell(n: int = 56, neck: float = 0.25) -> TriSurface:
    """Two unit balls joined by a thin neck of radius ``neck``."""

    def f(P):
        a = np.linalg.norm(P - [-1.2, 0, 0], axis=1) - 1.0
        b = np.linalg.norm(P - [1.2, 0, 0], axis=1) - 1.0
        c = np.hypot(P[:, 1], P[:, 2]) - neck
        c = np.where(np.abs(P[:, 0]) < 1.2, c, 1.0)
        return np.minimum(np.minimum(a, b), c)

    V, T = marching_r3(f, [-2.4, -1.2, -1.2], [2.4, 1.2, 1.2], n)
    return oriented(TriSurface(V, T, on_sphere=False))


def mobius_band(m: int = 24, n: int = 3) -> TriSurface:
    """Triangulated Moebius band (non-orientable, with boundary)."""
    V = []
    for i in range(m):
        u = 2 * math.pi * i / m
        for j in range(n + 1):
            s = -0.5 + j / n
            V.append([(1 + s * math.cos(u / 2)) * math.cos(u), (1 + s * math.cos(u / 2)) * math.sin(u),
                      s * math.sin(u / 2)])
    F = []
    for i in range(m):
        for j in range(n):
            a, b = i * (n + 1) + j, i * (n + 1) + j + 1
            if i + 1 < m:
                c, d = (i + 1) * (n + 1) + j, (i + 1) * (n + 1) + j + 1
            else:  # the half twist glues strip position j to n - j
                c, d = n - j, n - j - 1
            F += [[a, c, d], [a, d, b]]
    return TriSurface(np.array(V), np.array(F), on_sphere=False)


def disjoint_union(*surfaces: TriSurface) -> TriSurface:
    V, T, off = [], [], 0
    for S in surfaces:
        V.append(S.vertices)
        T.append(S.triangles + off)
        off += S.n_vertices
    return TriSurface(np.vstack(V), np.vstack(T), on_sphere=surfaces[0].on_sphere)


def to_s3_patch(S: TriSurface, center=(0.0, 0.0, 0.0, 1.0)) -> TriSurface:
    """Places an R^3 surface near ``center`` in S^3 by inverse stereographic projection.

    The input is scaled by 1/2 first so the map is close to an isometry for
    small surfaces.
    """
    P = S.vertices * 0.5
    q = np.sum(P * P, axis=1)
    W = np.column_stack([2 * P, (1 - q)[:, None]]) / (1 + q)[:, None]
    c = np.asarray(center, float)
    c = c / np.linalg.norm(c)
    # rotate e4 to center
    Q, _ = np.linalg.qr(np.column_stack([c, np.eye(4)]))
    if Q[:, 0] @ c < 0:
        Q = -Q
    basis = np.column_stack([Q[:, 1:4], Q[:, 0]])
    if np.linalg.det(basis) < 0:
        basis[:, 0] = -basis[:, 0]
    return TriSurface(W @ basis.T, S.triangles, on_sphere=True)


def cone_torus(m: int = 32, n: int = 12) -> tuple:
    """Torus with a small disc replaced by a cone over its boundary; returns ``(surface, apex)``."""
    T = torus_r3(1.0, 0.35, m, n)
    # lift one vertex off the surface so its star becomes a cone over its link
    v0 = 0
    V = T.vertices.copy()
    V[v0] = V[v0] * 1.15
    return TriSurface(V, T.triangles, frozenset({v0}), on_sphere=False), v0


__all__ = ["icosphere", "great_sphere_s3", "torus_r3", "flat_torus", "torus_chain", "dumbbell",
           "mobius_band", "disjoint_union", "to_s3_patch", "cone_torus"]
