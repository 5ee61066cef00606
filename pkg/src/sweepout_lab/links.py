"""Closed polylines in S^3, linking numbers and the Hopf-link loops of the genus-one members."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import LoopsIntersect, NoCenter, NotInOmegaPsi, PoleSearchFailed, TrackingLost, UnresolvedZero
from .family import CutoffConfig, DiskParam, ProjParam, center_points, f_profile, f_values, psi_ambient
from .s3geom import TWO_PI, chart_to_ambient, geodesic_distances, stereographic

POLE_CLEARANCE = 0.05
ROUNDING_GUARD = 0.1
MIN_SEPARATION = 1e-6

# 4-point Gauss-Legendre rule on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(4)
_GL_X = (_GL_X + 1.0) / 2.0
_GL_W = _GL_W / 2.0


@dataclass(frozen=True, eq=False)
class LoopS3:
    """Closed polyline on S^3; the last point connects back to the first."""

    points: np.ndarray

    def __post_init__(self):
        P = np.asarray(self.points, dtype=float)
        if P.ndim != 2 or P.shape[1] != 4 or P.shape[0] < 8:
            raise ValueError("a loop needs at least 8 points in R^4")
        P = P / np.linalg.norm(P, axis=1, keepdims=True)
        if np.any(np.linalg.norm(P - np.roll(P, -1, axis=0), axis=1) < 1e-12):
            raise ValueError("consecutive loop points coincide")
        P.setflags(write=False)
        object.__setattr__(self, "points", P)

    def __len__(self):
        return self.points.shape[0]

    def refined(self, factor: int = 2) -> "LoopS3":
        """Inserts ``factor - 1`` points on each segment (chordally, then renormalized)."""
        P = self.points
        Q = np.roll(P, -1, axis=0)
        s = np.arange(factor)[:, None, None] / factor
        R = ((1 - s) * P[None] + s * Q[None]).transpose(1, 0, 2).reshape(-1, 4)
        return LoopS3(R)

    def is_simple(self, tol: float = 1e-9) -> bool:
        """No two non-adjacent vertices coincide."""
        P = self.points
        n = len(P)
        D = np.linalg.norm(P[:, None] - P[None], axis=2)
        i, j = np.triu_indices(n, 2)
        far = (j - i) % n != n - 1
        return bool(np.all(D[i[far], j[far]] > tol))

    def to_obj(self) -> str:
        lines = [f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g} {p[3]:.17g}" for p in self.points]
        idx = " ".join(str(k + 1) for k in range(len(self.points))) + " 1"
        return "\n".join(lines) + f"\nl {idx}\n"

    @classmethod
    def from_obj(cls, text: str) -> "LoopS3":
        pts = [[float(x) for x in ln.split()[1:5]] for ln in text.splitlines() if ln.startswith("v ")]
        return cls(np.array(pts))


def _densify(P: np.ndarray, step: float) -> np.ndarray:
    """Vertices plus points along every segment at spacing at most ``step`` (for clearance tests)."""
    Q = np.roll(P, -1, axis=0)
    k = np.maximum(1, np.ceil(np.linalg.norm(Q - P, axis=1) / step)).astype(np.int64)
    seg = np.repeat(np.arange(len(P)), k)
    s = (np.arange(k.sum()) - np.repeat(np.cumsum(k) - k, k)) / np.repeat(k, k)
    R = (1 - s)[:, None] * P[seg] + s[:, None] * Q[seg]
    return R / np.linalg.norm(R, axis=1, keepdims=True)


def loop_distance(A: LoopS3, B: LoopS3) -> float:
    """Minimum geodesic distance between densely resampled copies of two loops."""
    step = 0.25 * min(_seg_median(A.points), _seg_median(B.points), 0.02)
    X, Y = _densify(A.points, step), _densify(B.points, step)
    best, _ = cKDTree(Y).query(X)
    return 2.0 * math.asin(min(1.0, float(best.min()) / 2.0))


def _seg_median(P):
    return float(np.median(np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1)))


def find_pole(A: LoopS3, B: LoopS3, seed: int = 0, tries: int = 256) -> np.ndarray:
    """Projection pole at distance > 0.05 from both loops: coordinate poles first, then random."""
    X = np.vstack([_densify(A.points, 0.01), _densify(B.points, 0.01)])
    cands = [s * e for e in np.eye(4) for s in (1.0, -1.0)]
    rng = np.random.default_rng(seed)
    for k in range(8 + tries):
        if k < 8:
            p = cands[k]
        else:
            p = rng.normal(size=4)
            p /= np.linalg.norm(p)
        d = geodesic_distances(X, np.broadcast_to(p, X.shape))
        if float(d.min()) > POLE_CLEARANCE:
            return p
    raise PoleSearchFailed("no pole with enough clearance from both loops")


def _gauss_pairs(P0, P1, Q0, Q1, sub: int) -> np.ndarray:
    """Gauss integrand summed per segment pair, each segment split ``sub`` times, 4 nodes per piece."""
    s = (np.arange(sub)[:, None] + _GL_X[None]).reshape(-1) / sub  # nodes on [0, 1]
    w = np.tile(_GL_W, sub) / sub
    dP, dQ = P1 - P0, Q1 - Q0
    X = P0[:, None] + s[None, :, None] * dP[:, None]          # (m, k, 3)
    Y = Q0[:, None] + s[None, :, None] * dQ[:, None]
    cross = np.cross(dP[:, None], dQ[None])                   # (m, n, 3)
    R = X[:, None, :, None] - Y[None, :, None, :]             # (m, n, k, k, 3)
    num = np.einsum("mnijc,mnc->mnij", R, cross)
    den = np.linalg.norm(R, axis=-1) ** 3
    return np.einsum("mnij,i,j->mn", num / den, w, w)


def gauss_linking_sum(X: np.ndarray, Y: np.ndarray, refine_ratio: float = 3.0) -> float:
    """Gauss double integral of two closed polylines in R^3 by 4-point quadrature per segment pair.

    Segment pairs closer than ``refine_ratio`` times their length are split
    into 8 pieces each before applying the rule.
    """
    P0, P1 = X, np.roll(X, -1, axis=0)
    Q0, Q1 = Y, np.roll(Y, -1, axis=0)
    total = 0.0
    mid_p, mid_q = (P0 + P1) / 2, (Q0 + Q1) / 2
    len_p = np.linalg.norm(P1 - P0, axis=1)
    len_q = np.linalg.norm(Q1 - Q0, axis=1)
    for k in range(0, len(P0), 64):
        sl = slice(k, k + 64)
        vals = _gauss_pairs(P0[sl], P1[sl], Q0, Q1, 1)
        dist = np.linalg.norm(mid_p[sl, None] - mid_q[None], axis=2)
        near = dist < refine_ratio * np.maximum(len_p[sl, None], len_q[None])
        if np.any(near):
            ii, jj = np.nonzero(near)
            for a in np.unique(ii):
                js = jj[ii == a]
                fine = _gauss_pairs(P0[sl][[a]], P1[sl][[a]], Q0[js], Q1[js], 8)
                vals[a, js] = fine[0]
        total += float(vals.sum())
    return total / (4.0 * math.pi)


def solid_angle_linking_sum(X: np.ndarray, Y: np.ndarray) -> float:
    """Exact Gauss integral of two closed polylines from per-segment-pair solid angles."""
    P0, P1 = X, np.roll(X, -1, axis=0)
    Q0, Q1 = Y, np.roll(Y, -1, axis=0)
    a, b = P0[:, None], P1[:, None]
    c, d = Q0[None], Q1[None]
    r13, r14, r23, r24 = c - a, d - a, c - b, d - b

    def unit(v):
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    n1, n2 = unit(np.cross(r13, r14)), unit(np.cross(r14, r24))
    n3, n4 = unit(np.cross(r24, r23)), unit(np.cross(r23, r13))

    def asin_dot(u, v):
        return np.arcsin(np.clip(np.sum(u * v, axis=-1), -1.0, 1.0))

    omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1)
    sgn = np.sign(np.sum(np.cross(d - c, b - a) * r13, axis=-1))
    return float(np.nansum(omega * sgn) / (4.0 * math.pi))


def linking_number(A: LoopS3, B: LoopS3, method: str = "gauss4", seed: int = 0) -> int:
    """Integer linking number of two disjoint loops, via stereographic projection to R^3."""
    if loop_distance(A, B) <= MIN_SEPARATION:
        raise LoopsIntersect("loops are closer than 1e-6")
    pole = find_pole(A, B, seed)
    X, Y = stereographic(A.points, pole), stereographic(B.points, pole)
    if method == "gauss4":
        val = gauss_linking_sum(X, Y)
    elif method == "solid_angle":
        val = solid_angle_linking_sum(X, Y)
    else:
        raise ValueError(f"unknown method {method!r}")
    k = int(round(val))
    if abs(val - k) >= ROUNDING_GUARD:
        raise ArithmeticError(f"linking sum {val:.4f} is not near an integer")
    return k


# ---------------------------------------------------------------------------
# standard loops

def great_circle(u, v, n: int = 128) -> LoopS3:
    """Great circle through orthonormal ``u``, ``v``."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    t = np.linspace(0.0, TWO_PI, n, endpoint=False)
    return LoopS3(np.cos(t)[:, None] * u + np.sin(t)[:, None] * v)


def hopf_pair(n: int = 128) -> tuple:
    """The circles ``{x1 = x2 = 0}`` and ``{x3 = x4 = 0}``."""
    e = np.eye(4)
    return great_circle(e[2], e[3], n), great_circle(e[0], e[1], n)


def small_circle(center, radius: float, u, v, n: int = 64) -> LoopS3:
    """Round circle of geodesic ``radius`` about ``center`` in the plane of tangent vectors ``u``, ``v``."""
    c = np.asarray(center, float)
    c = c / np.linalg.norm(c)
    t = np.linspace(0.0, TWO_PI, n, endpoint=False)
    dirs = np.cos(t)[:, None] * np.asarray(u, float) + np.sin(t)[:, None] * np.asarray(v, float)
    return LoopS3(math.cos(radius) * c + math.sin(radius) * dirs)


# ---------------------------------------------------------------------------
# Hopf loops of genus-one members

@dataclass
class HopfLoops:
    beta_plus: LoopS3
    beta_minus: LoopS3
    omegas: np.ndarray      # omega_1..omega_4
    zeros: np.ndarray       # the 4 zeros of f, sorted
    endpoints: dict         # {"+": 4 points on C, "-": 4 points on C}


def omega_psi_profile(a: ProjParam, z: DiskParam, cfg: CutoffConfig = CutoffConfig(), n: int = 4096):
    """The 4 simple zeros of ``f`` at ``(a, z)``; raises ``NotInOmegaPsi`` otherwise."""
    if a.affine() is None:
        raise NotInOmegaPsi("a5 = 0: the cut-off term vanishes")
    try:
        prof = f_profile(a, z, cfg, n)
    except (NoCenter, UnresolvedZero) as exc:
        raise NotInOmegaPsi(str(exc)) from exc
    if prof.count != 4 or any(o != 1 for o in prof.orders):
        raise NotInOmegaPsi(f"zero profile {prof.zeros} is not 4 simple zeros")
    return prof


def _line_ends(x: np.ndarray, d: np.ndarray) -> tuple:
    """Parameters ``t`` where ``x + t d`` meets the unit circle."""
    A = d @ d
    B = 2 * x @ d
    C = x @ x - 1.0
    disc = math.sqrt(B * B - 4 * A * C)
    return (-B - disc) / (2 * A), (-B + disc) / (2 * A)


def _arc(phi0: float, phi1: float, step: float) -> np.ndarray:
    """Points of C strictly between angles ``phi0`` and ``phi1`` along the shorter arc."""
    d = (phi1 - phi0 + math.pi) % TWO_PI - math.pi
    k = int(math.ceil(abs(d) / step))
    t = phi0 + d * np.arange(1, k) / k
    return np.column_stack([np.cos(t), np.sin(t), np.zeros_like(t), np.zeros_like(t)])


def _arc_len(phi0, phi1):
    return abs((phi1 - phi0 + math.pi) % TWO_PI - math.pi)


def _closed_loop(a, z, cfg, omegas: Sequence[float], direction: np.ndarray, n_seg: int) -> tuple:
    """Two chart segments ``x(omega) + t d`` joined through C into one polyline."""
    X = center_points(a, z, np.asarray(omegas), cfg)
    segs, ends = [], []
    for x, om in zip(X, omegas):
        t0, t1 = _line_ends(x, direction)
        t = np.linspace(t0, t1, n_seg)
        P = x[None] + t[:, None] * direction[None]
        W = chart_to_ambient(P[:, 0], P[:, 1], np.full(n_seg, om))
        W[[0, -1], 2:] = 0.0  # exact endpoints on C
        W /= np.linalg.norm(W, axis=1, keepdims=True)
        segs.append(W)
        ends.append([math.atan2(W[0, 1], W[0, 0]), math.atan2(W[-1, 1], W[-1, 0])])
    # join end of segment 0 to one end of segment 1 and back; pick the shorter total arc
    straight = _arc_len(ends[0][1], ends[1][1]) + _arc_len(ends[1][0], ends[0][0])
    crossed = _arc_len(ends[0][1], ends[1][0]) + _arc_len(ends[1][1], ends[0][0])
    seg1 = segs[1][::-1] if straight <= crossed else segs[1]
    e1 = ends[1][::-1] if straight <= crossed else ends[1]
    step = float(np.median(np.linalg.norm(np.diff(segs[0], axis=0), axis=1)))
    parts = [segs[0], _arc(ends[0][1], e1[0], step), seg1, _arc(e1[1], ends[0][0], step)]
    P = np.vstack(parts)
    # segments meeting C at the same point share that vertex
    keep = np.linalg.norm(P - np.roll(P, 1, axis=0), axis=1) > 1e-12
    return P[keep], [ends[0][0], ends[0][1], e1[0], e1[1]]


def hopf_loops(a: ProjParam, z: DiskParam, cfg: CutoffConfig = CutoffConfig(), n_seg: int = 96) -> HopfLoops:
    """The loops through the positive and negative regions built on the center curve.

    ``omega_1..omega_4`` are the midpoints of the arcs between consecutive
    zeros of ``f``, labelled so that ``f(omega_1) > 0``.  The positive loop
    runs along ``(t, t)`` lines at ``omega_1, omega_3``, the negative one along
    ``(t, -t)`` lines at ``omega_2, omega_4``; both close up through C.
    """
    prof = omega_psi_profile(a, z, cfg)
    zs = np.sort(prof.angles)
    nxt = np.roll(zs, -1)
    gaps = (nxt - zs) % TWO_PI
    mids = (zs + gaps / 2) % TWO_PI
    # signs refer to the representative with a5 = 1
    vals = f_values(a, z, mids, cfg) * np.sign(a.a[5])
    if not np.all(np.sign(vals) == np.sign(vals[0]) * np.array([1, -1, 1, -1])):
        raise NotInOmegaPsi("f does not alternate in sign between the zeros")
    start = 0 if vals[0] > 0 else 1
    om = np.roll(mids, -start)
    plus, ep = _closed_loop(a, z, cfg, [om[0], om[2]], np.array([1.0, 1.0]), n_seg)
    minus, em = _closed_loop(a, z, cfg, [om[1], om[3]], np.array([1.0, -1.0]), n_seg)
    return HopfLoops(LoopS3(plus), LoopS3(minus), om, zs, {"+": ep, "-": em})


def sign_separation(a: ProjParam, z: DiskParam, H: HopfLoops, cfg: CutoffConfig = CutoffConfig()) -> tuple:
    """``(min F on beta+, max F on beta-)`` for the ``a5 = 1`` representative; strict separation means ``(> 0, < 0)``."""
    sgn = np.sign(a.a[5])
    fp = sgn * psi_ambient(a, z, H.beta_plus.points, cfg)
    fm = sgn * psi_ambient(a, z, H.beta_minus.points, cfg)
    return float(fp.min()), float(fm.max())


# ---------------------------------------------------------------------------
# zero monodromy

def zero_monodromy(samples: Sequence[tuple], cfg: CutoffConfig = CutoffConfig(), n: int = 4096) -> tuple:
    """Permutation of the 4 zeros of ``f`` induced by a closed loop of parameters.

    ``samples`` lists ``(a, z)`` pairs along the loop; the loop closes from
    the last sample back to the first.  Entry ``i`` of the result is the
    sorted position at the start of the zero that started at position ``i``
    after one traversal.
    """
    if len(samples) < 1:
        raise ValueError("need at least one sample")
    zeros = [np.sort(omega_psi_profile(a, z, cfg, n).angles) for a, z in samples]
    pos = np.arange(4)  # current slot of each tracked zero
    seq = zeros + [zeros[0]]
    for k in range(len(seq) - 1):
        cur, nxt = seq[k], seq[k + 1]
        D = np.abs((nxt[None, :] - cur[:, None] + math.pi) % TWO_PI - math.pi)
        match = np.argmin(D, axis=1)
        sep = min(np.min(np.abs((np.roll(cur, -1) - cur) % TWO_PI)),
                  np.min(np.abs((np.roll(nxt, -1) - nxt) % TWO_PI)))
        if len(set(match.tolist())) != 4 or np.max(D[np.arange(4), match]) >= sep / 2:
            raise TrackingLost(f"zeros cannot be matched between samples {k} and {k + 1}")
        pos = match[pos]
    return tuple(int(p) for p in pos)


def central_loop(turns: int = 1, n: int = 64, a: ProjParam | None = None) -> list:
    """Samples of ``{a} x boundary(D)`` traversed ``turns`` times (default ``a`` is the central point)."""
    from .family import CENTRAL

    a = CENTRAL if a is None else a
    th = np.linspace(0.0, TWO_PI * turns, n * abs(turns), endpoint=False) if turns else np.zeros(1)
    return [(a, DiskParam(1.0, float(t))) for t in th]


__all__ = ["LoopS3", "loop_distance", "find_pole", "gauss_linking_sum", "solid_angle_linking_sum",
           "linking_number", "great_circle", "hopf_pair", "small_circle", "HopfLoops", "omega_psi_profile",
           "hopf_loops", "sign_separation", "zero_monodromy", "central_loop"]
