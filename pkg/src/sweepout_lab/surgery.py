"""Neck-pinch and shrink surgeries, pinch-off logs and geodesic-ball combinatorics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import (AreaTooLarge, GenusIncreased, NoAnnulus, NoSuchComponent, NotSimple, RadiusTooLarge,
                     StuckNoCycle)
from .homology import Z2Chain, chain_from_vertex_cycle, h1_basis, independent_short_loops, simple_cycles
from .mesh import (TriSurface, area, cap_boundaries, cap_loop, compact, component_genera, cut_along_cycle,
                   excise, genus, oriented)
from .s3geom import S3Point, geodesic_distance, geodesic_distances

INJECTIVITY_RADIUS = math.pi


# ---------------------------------------------------------------------------
# neck pinch and shrink

@dataclass
class PinchResult:
    surface: TriSurface
    left: list          # vertex loop bounding the left cap
    right: list         # vertex loop bounding the right cap
    caps: tuple         # (left cap faces, right cap faces)


def vertex_cycle(S: TriSurface, c: Union[Z2Chain, Sequence[int]]) -> list:
    """A simple edge cycle as an ordered vertex list; raises ``NotSimple`` otherwise."""
    if not isinstance(c, Z2Chain):
        cyc = [int(v) for v in c]
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            raise NotSimple("vertex cycle repeats a vertex or is too short")
        try:
            chain_from_vertex_cycle(S, cyc)
        except ValueError as exc:
            raise NotSimple(str(exc)) from exc
        return cyc
    deg = c.vertex_degrees(S)
    if len(c) < 3 or np.any(deg > 2) or np.any(deg % 2):
        raise NotSimple("chain is not a simple closed curve")
    pieces = simple_cycles(S, c)
    if len(pieces) != 1:
        raise NotSimple(f"chain splits into {len(pieces)} circles")
    return pieces[0]


def neck_pinch_detailed(S: TriSurface, c: Union[Z2Chain, Sequence[int]]) -> PinchResult:
    """Cuts ``S`` along the simple cycle ``c`` and caps both new boundary circles with fans."""
    S = oriented(S)
    cyc = vertex_cycle(S, c)
    be = S.edges[S.boundary_edges]
    if be.size and np.isin(cyc, be).any():
        raise NoAnnulus("cycle touches the surface boundary")
    try:
        W, left, right, _ = cut_along_cycle(S, cyc)
    except ValueError as exc:
        raise NoAnnulus(str(exc)) from exc
    if len(W.boundary_edges) != len(S.boundary_edges) + 2 * len(cyc):
        raise NoAnnulus("the star of the cycle is not an annulus")
    W, cap1 = cap_loop(W, left, reverse=True)
    W, cap2 = cap_loop(W, right, reverse=False)
    return PinchResult(W, list(left), list(right), (cap1, cap2))


def neck_pinch(S: TriSurface, c: Union[Z2Chain, Sequence[int]]) -> TriSurface:
    return neck_pinch_detailed(S, c).surface


def reglue(P: PinchResult) -> TriSurface:
    """Undoes a neck pinch: drops both caps and identifies the two loops."""
    S = P.surface
    keep = np.ones(S.n_faces, dtype=bool)
    keep[np.concatenate(P.caps)] = False
    T = S.triangles[keep].copy()
    ident = np.arange(S.n_vertices)
    ident[P.right] = P.left
    T = ident[T]
    out = TriSurface(S.vertices, T, S.punctate_marks, S.provenance, S.on_sphere)
    out, _ = compact(out, np.arange(out.n_faces))
    return out


def components(S: TriSurface) -> list:
    """Face-index arrays of the connected components, ordered by their smallest face."""
    if S.n_faces == 0:
        return []
    lab = S.face_labels()
    _, first = np.unique(lab, return_index=True)
    order = lab[np.sort(first)]
    return [np.flatnonzero(lab == c) for c in order]


def shrink_component(S: TriSurface, comp: int) -> TriSurface:
    """Deletes connected component ``comp`` (index into :func:`components`)."""
    comps = components(S)
    if not 0 <= comp < len(comps):
        raise NoSuchComponent(comp)
    keep = np.setdiff1d(np.arange(S.n_faces), comps[comp])
    out, remap = compact(S, keep)
    marks = frozenset(int(remap[m]) for m in S.punctate_marks if remap[m] >= 0)
    return out.replace(marks=marks)


# ---------------------------------------------------------------------------
# pinch-off processes

@dataclass(frozen=True)
class Isotopy:
    """Moves the vertices by ``move`` (renormalized onto S^3 for spherical surfaces)."""

    move: Callable | None = None


@dataclass(frozen=True)
class NeckPinch:
    cycle: tuple        # vertex cycle or Z2Chain on the current surface

    def __init__(self, cycle):
        object.__setattr__(self, "cycle", cycle if isinstance(cycle, Z2Chain) else tuple(int(v) for v in cycle))


@dataclass(frozen=True)
class Shrink:
    component: int


@dataclass(frozen=True)
class SurgeryEvent:
    kind: str           # "isotopy", "neck_pinch" or "shrink"
    genus_before: int
    genus_after: int
    payload: str = ""

    def __post_init__(self):
        if self.genus_after > self.genus_before:
            raise GenusIncreased(f"{self.kind}: genus {self.genus_before} -> {self.genus_after}")

    def to_line(self) -> str:
        tail = f" {self.payload}" if self.payload else ""
        return f"EVENT {self.kind} {self.genus_before} {self.genus_after}{tail}"


@dataclass
class PinchOffLog:
    events: list = field(default_factory=list)
    initial: TriSurface | None = None
    final: TriSurface | None = None

    @property
    def genus_trace(self) -> tuple:
        if not self.events:
            return (process_genus(self.initial),) if self.initial is not None else ()
        return (self.events[0].genus_before,) + tuple(e.genus_after for e in self.events)

    def to_text(self) -> str:
        return "".join(e.to_line() + "\n" for e in self.events)

    @staticmethod
    def parse(text: str) -> list:
        out = []
        for line in text.splitlines():
            parts = line.split(maxsplit=4)
            if not parts:
                continue
            if parts[0] != "EVENT" or len(parts) < 4:
                raise ValueError(f"bad log line: {line!r}")
            out.append(SurgeryEvent(parts[1], int(parts[2]), int(parts[3]), parts[4] if len(parts) > 4 else ""))
        return out


def process_genus(S: TriSurface) -> int:
    return genus(S) if S.n_faces else 0


def apply_process(S: TriSurface, events: Iterable) -> tuple:
    """Runs isotopies, neck pinches and shrinks in order, logging the genus after each."""
    log = PinchOffLog(initial=S)
    cur = S
    g = process_genus(cur)
    for ev in events:
        if isinstance(ev, Isotopy):
            if ev.move is None:
                nxt = cur
            else:
                V = np.asarray(ev.move(cur.vertices), dtype=float)
                if cur.on_sphere:
                    V = V / np.linalg.norm(V, axis=1, keepdims=True)
                nxt = cur.replace(vertices=V)
            kind, payload = "isotopy", ""
        elif isinstance(ev, NeckPinch):
            nxt = neck_pinch(cur, ev.cycle)
            n = len(ev.cycle)
            kind, payload = "neck_pinch", f"cycle_len={n}"
        elif isinstance(ev, Shrink):
            nxt = shrink_component(cur, ev.component)
            kind, payload = "shrink", f"component={ev.component}"
        else:
            raise TypeError(f"unknown event {ev!r}")
        g2 = process_genus(nxt)
        log.events.append(SurgeryEvent(kind, g, g2, payload))
        cur, g = nxt, g2
    log.final = cur
    return cur, log


def random_event(S: TriSurface, rng: np.random.Generator):
    """A random valid event for ``S``: isotopy, a pinch along a vertex link or a homology generator, or a shrink."""
    choices = ["isotopy"]
    if S.n_faces:
        choices += ["shrink", "link", "generator"]
    kind = choices[rng.integers(len(choices))]
    if kind == "isotopy":
        d = S.vertices.shape[1]
        A = rng.normal(size=(d, d)) * 0.01
        Q = np.eye(d) + A - A.T
        return Isotopy(lambda V, Q=Q: V @ Q.T)
    if kind == "shrink":
        return Shrink(int(rng.integers(len(components(S)))))
    if kind == "generator":
        basis = h1_basis(S)
        if basis.rank:
            c = basis.cycles[int(rng.integers(basis.rank))]
            pieces = simple_cycles(S, c)
            if len(pieces) == 1 and len(pieces[0]) >= 3:
                return NeckPinch(pieces[0])
    # link of an interior vertex whose star is a disk with a simple boundary
    for _ in range(20):
        v = int(rng.integers(S.n_vertices))
        loop = vertex_link(S, v)
        if loop is not None:
            return NeckPinch(loop)
    return Isotopy(None)


def vertex_link(S: TriSurface, v: int) -> list | None:
    """The link of ``v`` as a vertex cycle, or ``None`` when it is not a simple cycle of length >= 3."""
    faces = np.flatnonzero(np.any(S.triangles == v, axis=1))
    if faces.size < 3:
        return None
    step = {}
    for tri in S.triangles[faces].tolist():
        k = tri.index(v)
        x, y = tri[(k + 1) % 3], tri[(k + 2) % 3]
        if x in step:
            return None
        step[x] = y
    start = next(iter(step))
    loop, cur = [start], step[start]
    while cur != start:
        if cur not in step or len(loop) > len(step):
            return None
        loop.append(cur)
        cur = step[cur]
    if len(loop) != len(step) or len(set(loop)) != len(loop):
        return None
    try:
        chain_from_vertex_cycle(S, loop)
    except ValueError:
        return None
    return loop


# ---------------------------------------------------------------------------
# geodesic balls

@dataclass(frozen=True)
class Ball:
    center: S3Point
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius < math.pi / 4:
            raise RadiusTooLarge(f"ball radius {self.radius} outside (0, pi/4)")

    def contains(self, p, tol: float = 1e-12) -> bool:
        return geodesic_distance(self.center, p) <= self.radius + tol


def _as_array(p) -> np.ndarray:
    return np.asarray(p.array if hasattr(p, "array") else p, dtype=float)


def disjoint_balls(centers: Sequence, zeta: float, n: int, q: int | None = None) -> list:
    """Merges balls ``B(p_i, zeta)`` until the ``n``-dilated closures are disjoint.

    Whenever two current balls have intersecting closed ``n``-dilates, the one
    with the larger index is dropped and the common radius grows by ``3n``;
    so ``q'`` balls remain with radius ``(3n)^(q - q') zeta``.
    """
    pts = [_as_array(p) for p in centers]
    q = len(pts) if q is None else q
    if len(pts) > q:
        raise ValueError("more centers than q")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not 0.0 < zeta < INJECTIVITY_RADIUS / (2 * n * (3 * n) ** len(pts)):
        raise RadiusTooLarge(f"zeta={zeta} exceeds the injectivity bound for q={len(pts)}, n={n}")
    alive = list(range(len(pts)))
    r = zeta
    while True:
        hit = None
        for i_pos, i in enumerate(alive):
            for j in alive[i_pos + 1:]:
                if geodesic_distance(pts[i], pts[j]) <= 2 * n * r:
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        alive.remove(hit[1])
        r *= 3 * n
    return [Ball(S3Point(pts[i]), r) for i in alive]


def check_disjoint_balls(centers: Sequence, zeta: float, n: int, balls: Sequence[Ball]) -> list:
    """Direct geometric check of the merge postconditions; returns the failed ones by name."""
    pts = [_as_array(p) for p in centers]
    bad = []
    q, qq = len(pts), len(balls)
    expect = (3 * n) ** (q - qq) * zeta
    if any(not math.isclose(b.radius, expect, rel_tol=1e-12) for b in balls):
        bad.append("radius")
    C = [b.center.array for b in balls]
    if any(not any(np.allclose(c, p, atol=1e-15) for p in pts) for c in C):
        bad.append("subset")
    for p in pts:
        # B(p, zeta) inside some B(c, zeta') iff d(p, c) + zeta <= zeta'
        if not any(geodesic_distance(p, c) + zeta <= b.radius * (1 + 1e-12) + 1e-12 for c, b in zip(C, balls)):
            bad.append("cover")
            break
    for i in range(qq):
        for j in range(i + 1, qq):
            if geodesic_distance(C[i], C[j]) <= 2 * n * balls[0].radius:
                bad.append("disjoint")
                break
    return bad


def annulus_radius_search(points: Sequence, q: int, N: int, R0: float) -> float:
    """A radius ``R`` in ``(5^(-2N q^2) R0, 5^(-2N) R0)`` with no point of ``P`` at distance in ``[R, 5^(2N) R)`` of another.

    Candidates ``5^(-2N(j + 1/2)) R0`` for ``j = 1 .. q^2 - 1`` give pairwise
    disjoint bands, and fewer than ``q^2 - 1`` point pairs exist, so one band
    is empty.
    """
    P = np.array([_as_array(p) for p in points]).reshape(-1, 4)
    if q < 2:
        raise ValueError("the radius interval is empty for q < 2")
    if len(P) > q:
        raise ValueError("more points than q")
    if not 0 < R0 < INJECTIVITY_RADIUS / 4:
        raise ValueError("R0 must lie in (0, injrad/4)")
    if len(P) > 1:
        iu = np.triu_indices(len(P), 1)
        d = geodesic_distances(P[iu[0]], P[iu[1]])
        d = d[d > 0]
    else:
        d = np.zeros(0)
    span = 5.0 ** (2 * N)
    for j in range(1, q * q):
        R = R0 * 5.0 ** (-2 * N * (j + 0.5))
        if not np.any((d >= R) & (d < span * R)):
            return float(R)
    raise AssertionError("pigeonhole bound violated")


def annulus_ok(points: Sequence, N: int, R: float) -> bool:
    P = np.array([_as_array(p) for p in points]).reshape(-1, 4)
    span = 5.0 ** (2 * N)
    for i in range(len(P)):
        for j in range(len(P)):
            if i != j:
                d = geodesic_distance(P[i], P[j])
                if R <= d < span * R:
                    return False
    return True


# ---------------------------------------------------------------------------
# small balls

SMALL_AREA = 0.05


@dataclass
class SmallBallsResult:
    balls: list
    radius: float
    remainder: TriSurface
    remainder_genus: int


def small_balls_detailed(S: TriSurface, q: int, N: int, eps: float, max_area: float = SMALL_AREA) -> SmallBallsResult:
    """Balls of radius in ``(eps / (2 (3N)^q), eps)`` whose removal leaves a genus-0 surface.

    Punctate marks are excised and capped first; short loops of the capped
    surface and the marks each get a ball; the balls are merged by
    :func:`disjoint_balls` with dilation ``N``.
    """
    if not S.on_sphere:
        raise ValueError("small_balls needs a surface in S^3")
    a = area(S)
    if a > max_area:
        raise AreaTooLarge(f"area {a:.4g} exceeds {max_area}")
    h = S.mean_edge_length()
    marks = [S.vertices[m] for m in sorted(S.punctate_marks)]
    W = excise(S, marks, 2.5 * h) if marks else S.replace(marks=frozenset())
    caps = []
    if not W.is_closed:
        W, caps = cap_boundaries(W)
    g = int(component_genera(W).sum())
    if g + len(marks) > q:
        raise ValueError(f"genus {g} plus {len(marks)} marks exceeds q={q}")
    forb = [c.tolist() for c in caps]
    loops = independent_short_loops(W, g, forbidden=forb).loops if g else []
    centers, need = [], []
    for lp in loops:
        vs = np.unique(W.edges[lp.array])
        vs = vs[vs < W.n_vertices]
        c = W.vertices[vs[0]]
        centers.append(c)
        need.append(float(geodesic_distances(W.vertices[vs], np.broadcast_to(c, (vs.size, 4))).max()) + 2 * h)
    for m in marks:
        centers.append(m)
        need.append(2.5 * h + 2 * h)
    zeta = 0.75 * eps / (3 * N) ** q
    if need and max(need) > zeta:
        raise RadiusTooLarge(f"loops need radius {max(need):.4g} but the scale allows {zeta:.4g}")
    balls = disjoint_balls(centers, zeta, N, q) if centers else []
    r = balls[0].radius if balls else zeta
    rem = excise(S, [b.center.array for b in balls], r) if balls else S.replace(marks=frozenset())
    rg = int(component_genera(rem, capped=True).sum()) if rem.n_faces else 0
    if rg != 0:
        raise StuckNoCycle(f"ball removal left genus {rg}")
    return SmallBallsResult(balls, r, rem, rg)


def small_balls(S: TriSurface, q: int, N: int, eps: float, max_area: float = SMALL_AREA) -> list:
    return small_balls_detailed(S, q, N, eps, max_area).balls


__all__ = ["PinchResult", "vertex_cycle", "neck_pinch", "neck_pinch_detailed", "reglue", "components",
           "shrink_component", "Isotopy", "NeckPinch", "Shrink", "SurgeryEvent", "PinchOffLog", "apply_process",
           "process_genus", "random_event", "vertex_link", "Ball", "disjoint_balls", "check_disjoint_balls",
           "annulus_radius_search", "annulus_ok", "SmallBallsResult", "small_balls", "small_balls_detailed"]
