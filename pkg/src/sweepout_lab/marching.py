"""Marching tetrahedra on a global tetrahedralization of S^3.

The 3-sphere is triangulated as the radial projection of the boundary of the
hypercube ``[-1, 1]^4``.  Each of the 8 facets carries a ``(2N)^3`` grid of
cubes (equiangular spacing) and every cube is cut into 6 Kuhn tetrahedra
along its increasing diagonal.  Kuhn splits induce the increasing diagonal
on every square face, so neighbouring facets agree on shared faces and the
complex is a closed simplicial 3-manifold.  Lattice vertices are identified
by integer 4-coordinates, which makes welding exact.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np

# Kuhn split of the unit cube: one tetrahedron per permutation of the axes
_KUHN = []
for perm in itertools.permutations(range(3)):
    corner = np.zeros(3, dtype=np.int64)
    tet = [corner.copy()]
    for ax in perm:
        corner[ax] += 1
        tet.append(corner.copy())
    _KUHN.append(np.array(tet))
KUHN_TETS = np.array(_KUHN)  # (6, 4, 3)


def _case_table():
    """Triangles (as pairs of local tet vertices) for each of the 16 sign patterns."""
    table = {}
    for mask in range(16):
        pos = [i for i in range(4) if mask >> i & 1]
        neg = [i for i in range(4) if not mask >> i & 1]
        if len(pos) in (0, 4):
            tris = []
        elif len(pos) == 1 or len(neg) == 1:
            lone, rest = (pos[0], neg) if len(pos) == 1 else (neg[0], pos)
            tris = [[(lone, rest[0]), (lone, rest[1]), (lone, rest[2])]]
        else:
            p1, p2 = pos
            n1, n2 = neg
            tris = [[(p1, n1), (p1, n2), (p2, n2)], [(p1, n1), (p2, n2), (p2, n1)]]
        table[mask] = np.array(tris, dtype=np.int64).reshape(-1, 3, 2)
    return table


CASES = _case_table()


def lattice_points(K: np.ndarray, N: int) -> np.ndarray:
    """Unit vectors for integer lattice coordinates ``K`` in ``[-N, N]^4`` (one of them ``+-N``)."""
    U = np.tan((math.pi / 4.0) * (np.asarray(K, dtype=float) / N))
    return U / np.linalg.norm(U, axis=-1, keepdims=True)


def encode(K: np.ndarray, N: int) -> np.ndarray:
    base = 2 * N + 1
    K = np.asarray(K, dtype=np.int64) + N
    return ((K[..., 3] * base + K[..., 2]) * base + K[..., 1]) * base + K[..., 0]


def decode(code: np.ndarray, N: int) -> np.ndarray:
    base = 2 * N + 1
    code = np.asarray(code, dtype=np.int64)
    out = np.empty(code.shape + (4,), dtype=np.int64)
    for i in range(4):
        out[..., i] = code % base
        code = code // base
    return out - N


def _facet_tets(values: np.ndarray, axis: int, sign: int, N: int):
    """Crossing tetrahedra of one facet: returns ``(keys (T, 4), positive mask (T, 4))``."""
    pos = values > 0.0
    M = 2 * N
    # a cube is active when its 8 corners do not all share a sign
    any_pos = np.zeros((M, M, M), dtype=bool)
    all_pos = np.ones((M, M, M), dtype=bool)
    for di, dj, dk in itertools.product((0, 1), repeat=3):
        sl = pos[di:di + M, dj:dj + M, dk:dk + M]
        any_pos |= sl
        all_pos &= sl
    cubes = np.argwhere(any_pos & ~all_pos)
    if cubes.size == 0:
        return np.empty((0, 4), np.int64), np.empty((0, 4), bool)
    # (C, 6, 4, 3) local lattice indices of every tet corner
    idx = cubes[:, None, None, :] + KUHN_TETS[None]
    idx = idx.reshape(-1, 4, 3)
    tet_pos = pos[idx[..., 0], idx[..., 1], idx[..., 2]]
    npos = tet_pos.sum(axis=1)
    keep = (npos > 0) & (npos < 4)
    idx, tet_pos = idx[keep], tet_pos[keep]
    K = np.empty(idx.shape[:2] + (4,), dtype=np.int64)
    free = [i for i in range(4) if i != axis]
    K[..., axis] = sign * N
    for j, ax in enumerate(free):
        K[..., ax] = idx[..., j] - N
    return encode(K, N), tet_pos


def _refine_crossings(fun, A, B, fA, fB, iters: int = 3):
    """Zero of ``fun`` on the great-circle arc from ``A`` to ``B`` by regula falsi."""
    lo, hi = np.zeros(len(A)), np.ones(len(A))
    flo, fhi = fA.copy(), fB.copy()
    t = flo / (flo - fhi)
    for _ in range(iters):
        P = (1 - t)[:, None] * A + t[:, None] * B
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        ft = fun(P)
        left = np.sign(ft) == np.sign(flo)
        lo = np.where(left, t, lo)
        flo = np.where(left, ft, flo)
        hi = np.where(left, hi, t)
        fhi = np.where(left, fhi, ft)
        t = lo + (hi - lo) * flo / (flo - fhi)
    t = np.clip(np.where(np.isfinite(t), t, 0.5), 1e-6, 1 - 1e-6)
    P = (1 - t)[:, None] * A + t[:, None] * B
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def marching_s3(fun: Callable[[np.ndarray], np.ndarray], N: int, rotation: np.ndarray | None = None,
                refine_iters: int = 3):
    """Triangulates ``{fun = 0}`` on S^3 with ``2N`` cells along each facet edge.

    ``fun`` maps ``(n, 4)`` unit vectors to values.  ``rotation`` (4x4
    orthogonal) moves the lattice off special positions.  Returns
    ``(vertices (V, 4), triangles (F, 3))``; triangles are not yet oriented.
    """
    R = np.eye(4) if rotation is None else np.asarray(rotation, dtype=float)
    g = np.arange(-N, N + 1)
    G = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    all_keys, all_pos = [], []
    for axis in range(4):
        free = [i for i in range(4) if i != axis]
        for sign in (-1, 1):
            K = np.empty((G.shape[0], 4), dtype=np.int64)
            K[:, axis] = sign * N
            K[:, free] = G
            vals = fun(lattice_points(K, N) @ R.T).reshape(2 * N + 1, 2 * N + 1, 2 * N + 1)
            keys, tpos = _facet_tets(vals, axis, sign, N)
            all_keys.append(keys)
            all_pos.append(tpos)
    keys = np.concatenate(all_keys)
    tpos = np.concatenate(all_pos)
    if keys.shape[0] == 0:
        return np.empty((0, 4)), np.empty((0, 3), dtype=np.int64)
    masks = (tpos * (1 << np.arange(4))).sum(axis=1)
    edge_lists = []
    for mask in range(1, 15):
        sel = masks == mask
        if not np.any(sel):
            continue
        tab = CASES[mask]  # (t, 3, 2)
        k = keys[sel]
        # (n, t, 3, 2) lattice keys of edge endpoints
        edge_lists.append(k[:, tab].reshape(-1, 3, 2))
    E = np.concatenate(edge_lists)  # (F, 3, 2)
    # compact the lattice keys so an endpoint pair fits in one int64
    vkeys, vinv = np.unique(E, return_inverse=True)
    vinv = vinv.reshape(E.shape)
    vinv.sort(axis=2)
    ecode = vinv[..., 0] * np.int64(vkeys.size) + vinv[..., 1]
    ucode, inv = np.unique(ecode.reshape(-1), return_inverse=True)
    tris = inv.reshape(-1, 3)
    ends = vkeys[np.stack([ucode // vkeys.size, ucode % vkeys.size], axis=1)]
    A = lattice_points(decode(ends[:, 0], N), N) @ R.T
    B = lattice_points(decode(ends[:, 1], N), N) @ R.T
    fA, fB = fun(A), fun(B)
    V = _refine_crossings(fun, A, B, fA, fB, refine_iters)
    return V, tris


def marching_r3(fun: Callable[[np.ndarray], np.ndarray], lo, hi, n: int, refine_iters: int = 3):
    """Triangulates ``{fun = 0}`` inside the box ``[lo, hi]^3`` with ``n`` cubes per axis.

    Uses the same Kuhn split and case table as :func:`marching_s3`; the level
    set must stay away from the box boundary for the result to be closed.
    """
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (3,))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (3,))
    axes = [np.linspace(lo[i], hi[i], n + 1) for i in range(3)]
    P = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    pos = fun(P.reshape(-1, 3)).reshape(n + 1, n + 1, n + 1) > 0.0
    any_pos = np.zeros((n, n, n), dtype=bool)
    all_pos = np.ones((n, n, n), dtype=bool)
    for di, dj, dk in itertools.product((0, 1), repeat=3):
        sl = pos[di:di + n, dj:dj + n, dk:dk + n]
        any_pos |= sl
        all_pos &= sl
    cubes = np.argwhere(any_pos & ~all_pos)
    if cubes.size == 0:
        return np.empty((0, 3)), np.empty((0, 3), dtype=np.int64)
    idx = (cubes[:, None, None, :] + KUHN_TETS[None]).reshape(-1, 4, 3)
    tpos = pos[idx[..., 0], idx[..., 1], idx[..., 2]]
    keys = np.ravel_multi_index((idx[..., 0], idx[..., 1], idx[..., 2]), (n + 1,) * 3)
    masks = (tpos * (1 << np.arange(4))).sum(axis=1)
    edge_lists = []
    for mask in range(1, 15):
        sel = masks == mask
        if np.any(sel):
            edge_lists.append(keys[sel][:, CASES[mask]].reshape(-1, 3, 2))
    E = np.sort(np.concatenate(edge_lists), axis=2)
    M = np.int64((n + 1) ** 3)
    ucode, inv = np.unique(E[..., 0] * M + E[..., 1], return_inverse=True)
    flat = P.reshape(-1, 3)
    A, B = flat[ucode // M], flat[ucode % M]
    fA, fB = fun(A), fun(B)
    t = fA / (fA - fB)
    lo_t, hi_t = np.zeros(len(A)), np.ones(len(A))
    flo, fhi = fA, fB
    for _ in range(refine_iters):
        ft = fun(A + t[:, None] * (B - A))
        left = np.sign(ft) == np.sign(flo)
        lo_t, flo = np.where(left, t, lo_t), np.where(left, ft, flo)
        hi_t, fhi = np.where(left, hi_t, t), np.where(left, fhi, ft)
        t = lo_t + (hi_t - lo_t) * flo / (flo - fhi)
    t = np.clip(np.where(np.isfinite(t), t, 0.5), 1e-6, 1 - 1e-6)
    return A + t[:, None] * (B - A), inv.reshape(-1, 3)
