"""Triangulated surfaces: extraction from the families and intrinsic invariants.

A :class:`TriSurface` stores vertices as an ``(n, d)`` array.  Surfaces cut
out of S^3 have ``d = 4`` and ``on_sphere = True``; synthetic test surfaces
(flat tori in R^4, shapes in R^3) set ``on_sphere = False`` and are measured
with the ambient Euclidean metric.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize, sparse
from scipy.sparse.csgraph import connected_components

from .errors import EmptySurface, HasBoundary, NonOrientable, NotStabilized, PoleOnSurface
from .family import CutoffConfig, DiskParam, ProjParam, phi5_ambient, psi_ambient
from .marching import marching_s3
from .s3geom import geodesic_distances, random_rotation, stereographic, triangle_areas


@dataclass(frozen=True)
class GridSpec:
    """Sampling lattice for level-set extraction.

    ``resolution`` is the number of lattice cells along half a great circle,
    the same density a chart grid with ``resolution`` cells per axis has.
    ``chart_blend_radius`` is accepted for configuration compatibility; the
    cube-sphere lattice covers S^3 without chart seams so it has no effect.
    ``magnification`` is the lattice refinement factor at the center of the
    handle region of the desingularized family.
    """

    resolution: int = 64
    chart_blend_radius: float = 0.5
    magnification: float = 8.0
    rotation_seed: int = 20240601

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be at least 16")
        if self.magnification < 1.0:
            raise ValueError("magnification must be >= 1")

    @property
    def lattice_n(self) -> int:
        return max(4, int(round(self.resolution / 4)))

    @property
    def cell_size(self) -> float:
        """Approximate lattice spacing in radians."""
        return math.pi / (4 * self.lattice_n)

    def rotation(self) -> np.ndarray:
        return random_rotation(np.random.default_rng(self.rotation_seed))


@dataclass(frozen=True)
class FamilyParam:
    a: ProjParam
    z: DiskParam | None = None
    cfg: CutoffConfig = CutoffConfig()


@dataclass(frozen=True, eq=False)
class TriSurface:
    vertices: np.ndarray
    triangles: np.ndarray
    punctate_marks: frozenset = frozenset()
    provenance: object = None
    on_sphere: bool = True

    def __post_init__(self):
        V = np.ascontiguousarray(self.vertices, dtype=float)
        T = np.ascontiguousarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        V.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "triangles", T)
        object.__setattr__(self, "punctate_marks", frozenset(int(m) for m in self.punctate_marks))

    # -- combinatorics -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_faces(self) -> int:
        return self.triangles.shape[0]

    @cached_property
    def _edge_data(self):
        T = self.triangles
        half = np.stack([T[:, [0, 1]], T[:, [1, 2]], T[:, [2, 0]]], axis=1)  # (F, 3, 2)
        und = np.sort(half, axis=2).reshape(-1, 2)
        if und.shape[0] == 0:
            return np.empty((0, 2), np.int64), np.empty((0, 3), np.int64)
        edges, inv = np.unique(und, axis=0, return_inverse=True)
        return edges, inv.reshape(-1, 3)

    @property
    def edges(self) -> np.ndarray:
        """Sorted vertex pairs, one row per edge; edge ids index these rows."""
        return self._edge_data[0]

    @property
    def face_edges(self) -> np.ndarray:
        """Edge ids of ``(v0 v1, v1 v2, v2 v0)`` for each face."""
        return self._edge_data[1]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @cached_property
    def edge_face_count(self) -> np.ndarray:
        return np.bincount(self.face_edges.reshape(-1), minlength=self.n_edges)

    @cached_property
    def edge_faces(self) -> np.ndarray:
        """``(E, 2)`` incident faces per edge, ``-1`` where absent (manifold edges only)."""
        out = np.full((self.n_edges, 2), -1, dtype=np.int64)
        fe = self.face_edges.reshape(-1)
        faces = np.repeat(np.arange(self.n_faces), 3)
        order = np.argsort(fe, kind="stable")
        fe, faces = fe[order], faces[order]
        first = np.ones(fe.size, dtype=bool)
        first[1:] = fe[1:] != fe[:-1]
        out[fe[first], 0] = faces[first]
        second = ~first
        out[fe[second], 1] = faces[second]
        return out

    @property
    def boundary_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_face_count == 1)

    @property
    def is_closed(self) -> bool:
        return self.n_faces > 0 and bool(np.all(self.edge_face_count == 2))

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        A = self.vertices[self.edges[:, 0]]
        B = self.vertices[self.edges[:, 1]]
        if self.on_sphere:
            return geodesic_distances(A, B)
        return np.linalg.norm(A - B, axis=1)

    @cached_property
    def vertex_labels(self) -> tuple:
        """``(n_components, label per vertex)`` over the edge graph; isolated vertices form their own."""
        n = self.n_vertices
        E = self.edges
        g = sparse.coo_matrix((np.ones(len(E)), (E[:, 0], E[:, 1])), shape=(n, n))
        return connected_components(g, directed=False)

    def face_labels(self) -> np.ndarray:
        return self.vertex_labels[1][self.triangles[:, 0]]

    def mean_edge_length(self) -> float:
        return float(self.edge_lengths.mean()) if self.n_edges else 0.0

    def positions_on_surface(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.on_sphere:
            return X / np.linalg.norm(X, axis=-1, keepdims=True)
        return X

    def with_marks(self, marks: Iterable[int]) -> "TriSurface":
        return TriSurface(self.vertices, self.triangles, frozenset(marks), self.provenance, self.on_sphere)

    def replace(self, vertices=None, triangles=None, marks=None) -> "TriSurface":
        return TriSurface(self.vertices if vertices is None else vertices,
                          self.triangles if triangles is None else triangles,
                          self.punctate_marks if marks is None else marks,
                          self.provenance, self.on_sphere)


def compact(S: TriSurface, faces: np.ndarray | None = None) -> tuple:
    """Keeps ``faces`` (all by default), drops unused vertices.

    Returns ``(surface, old_to_new vertex map with -1 for dropped)``.
    """
    T = S.triangles if faces is None else S.triangles[faces]
    used = np.zeros(S.n_vertices, dtype=bool)
    used[T.reshape(-1)] = True
    remap = np.full(S.n_vertices, -1, dtype=np.int64)
    remap[used] = np.arange(int(used.sum()))
    marks = frozenset(int(remap[m]) for m in S.punctate_marks if used[m])
    out = TriSurface(S.vertices[used], remap[T], marks, S.provenance, S.on_sphere)
    return out, remap


# ---------------------------------------------------------------------------
# invariants

def euler_characteristic(S: TriSurface) -> int:
    used = np.unique(S.triangles) if S.n_faces else np.array([], dtype=np.int64)
    return int(used.size - S.n_edges + S.n_faces)


def _orientation_signs(S: TriSurface):
    """Per-face flip flags for a consistent orientation, or ``None`` when none exists.

    Builds the orientation double cover of the dual graph: sheet ``(f, 0)``
    keeps face ``f`` as stored, ``(f, 1)`` flips it.  Adjacent faces sharing an
    edge in the same direction must sit on opposite sheets.  The surface is
    orientable iff no face has both sheets in one component.
    """
    F = S.n_faces
    if F == 0:
        return np.zeros(0, dtype=bool)
    if np.any(S.edge_face_count > 2):
        return None
    ef = S.edge_faces
    inner = np.flatnonzero(ef[:, 1] >= 0)
    f, g = ef[inner, 0], ef[inner, 1]
    eid = S.edges[inner]

    def direction(faces):
        # +1 when the face traverses the edge from its lower to its higher vertex
        T = S.triangles[faces]
        lo, hi = eid[:, 0], eid[:, 1]
        nxt = np.roll(T, -1, axis=1)
        fwd = np.any((T == lo[:, None]) & (nxt == hi[:, None]), axis=1)
        return np.where(fwd, 1, -1)

    same = direction(f) == direction(g)  # consistent iff opposite directions
    rows = np.concatenate([f, f + F])
    cols = np.concatenate([np.where(same, g + F, g), np.where(same, g, g + F)])
    graph = sparse.coo_matrix((np.ones(rows.size), (rows, cols)), shape=(2 * F, 2 * F))
    _, lab = connected_components(graph, directed=False)
    if np.any(lab[:F] == lab[F:]):
        return None
    return lab[:F] > lab[F:]


def orientable(S: TriSurface) -> bool:
    return _orientation_signs(S) is not None


def oriented(S: TriSurface) -> TriSurface:
    flip = _orientation_signs(S)
    if flip is None:
        raise NonOrientable("no consistent triangle orientation exists")
    T = S.triangles.copy()
    T[flip] = T[flip][:, ::-1]
    return S.replace(triangles=T)


def component_genera(S: TriSurface, capped: bool = False) -> np.ndarray:
    """Genus of each connected component (components without faces are skipped).

    With ``capped`` every boundary circle is counted as closed by a disc.
    """
    if S.n_faces == 0:
        return np.zeros(0, dtype=np.int64)
    n, lab = S.vertex_labels
    used = np.zeros(S.n_vertices, dtype=bool)
    used[S.triangles.reshape(-1)] = True
    V = np.bincount(lab[used], minlength=n)
    E = np.bincount(lab[S.edges[:, 0]], minlength=n)
    F = np.bincount(lab[S.triangles[:, 0]], minlength=n)
    chi = V - E + F
    if capped:
        chi = chi + boundary_loop_counts(S)
    has_faces = F > 0
    twice = 2 - chi[has_faces]
    if np.any(twice % 2):
        raise NonOrientable("odd Euler characteristic on a closed component")
    return twice // 2


def boundary_loop_counts(S: TriSurface) -> np.ndarray:
    """Number of boundary circles per vertex component (cycle rank of the boundary graph)."""
    n, lab = S.vertex_labels
    B = S.edges[S.boundary_edges]
    if B.size == 0:
        return np.zeros(n, dtype=np.int64)
    verts = np.unique(B)
    g = sparse.coo_matrix((np.ones(len(B)), (B[:, 0], B[:, 1])), shape=(S.n_vertices,) * 2)
    _, blab = connected_components(g, directed=False)
    # cycle rank = E - V + C per component of the boundary graph
    comp_of = lab
    e_count = np.bincount(comp_of[B[:, 0]], minlength=n)
    v_count = np.bincount(comp_of[verts], minlength=n)
    bcomps = np.unique(blab[verts])
    rep = np.zeros(blab.max() + 1, dtype=np.int64)
    rep[blab[verts]] = comp_of[verts]
    c_count = np.bincount(rep[bcomps], minlength=n)
    return e_count - v_count + c_count


def genus(S: TriSurface) -> int:
    """Total genus, summed over components, of a closed orientable unmarked surface."""
    if S.n_faces == 0:
        return 0
    if not S.is_closed:
        raise HasBoundary(f"{len(S.boundary_edges)} boundary edges")
    if S.punctate_marks:
        raise ValueError("surface has punctate marks; use punctate_genus")
    if not orientable(S):
        raise NonOrientable("surface is not orientable")
    return int(component_genera(S).sum())


def area(S: TriSurface) -> float:
    if S.n_faces == 0:
        return 0.0
    V, T = S.vertices, S.triangles
    return float(triangle_areas(V[T[:, 0]], V[T[:, 1]], V[T[:, 2]]).sum())


def n_components(S: TriSurface) -> int:
    if S.n_faces == 0:
        return 0
    return int(np.unique(S.face_labels()).size)


def vertex_distances(S: TriSurface, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if S.on_sphere:
        return geodesic_distances(S.vertices, np.broadcast_to(p, S.vertices.shape))
    return np.linalg.norm(S.vertices - p, axis=1)


def excise(S: TriSurface, centers: Sequence[np.ndarray], radius: float) -> TriSurface:
    """Removes every face with a vertex within ``radius`` of one of ``centers``."""
    near = np.zeros(S.n_vertices, dtype=bool)
    for c in centers:
        near |= vertex_distances(S, c) < radius
    keep = ~np.any(near[S.triangles], axis=1)
    out, _ = compact(S, np.flatnonzero(keep))
    return out.replace(marks=frozenset())


def punctate_genus(S: TriSurface, radii: Sequence[float] | None = None) -> int:
    """Genus after excising balls about the punctate marks and capping the holes.

    ``radii`` must be decreasing; the result is accepted only when the two
    finest radii give the same genus.
    """
    if not S.punctate_marks:
        raise ValueError("surface has no punctate marks")
    if radii is None:
        h = S.mean_edge_length()
        radii = [4 * h, 3 * h, 2 * h]
    radii = list(radii)
    if len(radii) < 2 or any(r2 >= r1 for r1, r2 in zip(radii, radii[1:])):
        raise ValueError("need at least two strictly decreasing radii")
    centers = [S.vertices[m] for m in sorted(S.punctate_marks)]
    values = []
    for r in radii:
        cut = excise(S, centers, r)
        if cut.n_faces and not orientable(cut):
            raise NonOrientable("excised surface is not orientable")
        values.append(int(component_genera(cut, capped=True).sum()) if cut.n_faces else 0)
    if values[-1] != values[-2]:
        raise NotStabilized(f"genus over radii {radii}: {values}")
    return values[-1]


# ---------------------------------------------------------------------------
# boundary loops and capping

def boundary_loops(S: TriSurface) -> list:
    """Boundary circles as vertex cycles, following the face orientation where possible."""
    be = S.boundary_edges
    if be.size == 0:
        return []
    # directed boundary half-edges from the owning face
    ef = S.edge_faces[be, 0]
    T = S.triangles[ef]
    E = S.edges[be]
    nxt = np.roll(T, -1, axis=1)
    fwd = np.any((T == E[:, [0]]) & (nxt == E[:, [1]]), axis=1)
    src = np.where(fwd, E[:, 0], E[:, 1])
    dst = np.where(fwd, E[:, 1], E[:, 0])
    succ: dict = {}
    for s, d in zip(src.tolist(), dst.tolist()):
        succ.setdefault(s, []).append(d)
    loops = []
    while succ:
        start = next(iter(succ))
        loop = [start]
        cur = start
        while True:
            nxts = succ[cur]
            d = nxts.pop()
            if not nxts:
                del succ[cur]
            if d == start:
                break
            loop.append(d)
            cur = d
            if cur not in succ:
                break
        loops.append(loop)
    return loops


def cap_boundaries(S: TriSurface) -> tuple:
    """Closes every boundary circle with a fan around a new center vertex.

    Returns ``(surface, list of cap face-index arrays)``.
    """
    loops = boundary_loops(S)
    V = [S.vertices]
    T = [S.triangles]
    caps = []
    nv, nf = S.n_vertices, S.n_faces
    for loop in loops:
        c = S.positions_on_surface(S.vertices[loop].mean(axis=0)[None])
        V.append(c)
        k = len(loop)
        # boundary runs along the owning face, so the cap traverses it backwards
        fan = np.array([[nv, loop[(i + 1) % k], loop[i]] for i in range(k)], dtype=np.int64)
        T.append(fan)
        caps.append(np.arange(nf, nf + k))
        nv += 1
        nf += k
    out = TriSurface(np.vstack(V), np.vstack(T), S.punctate_marks, S.provenance, S.on_sphere)
    return out, caps


# ---------------------------------------------------------------------------
# extraction

def _smootherstep(t):
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)


@dataclass(frozen=True)
class DiskWarp:
    """Diffeomorphism of S^3 that magnifies a disk of the ``(x1, x2)`` plane.

    Inside the disk ``|x - center| < radius`` the ``(x1, x2)`` coordinates are
    pulled towards ``center`` by ``x -> center + d (k + (1 - k) S(|d|/radius))``
    with ``k = 1/magnification`` and ``S`` the quintic smooth step; the fibre
    angle is kept and the fibre radius readjusted so points stay on S^3.
    Outside the disk the map is the identity.
    """

    center: tuple
    radius: float
    magnification: float

    def __call__(self, W: np.ndarray) -> np.ndarray:
        W = np.array(W, dtype=float, copy=True)
        c = np.asarray(self.center)
        d = W[:, :2] - c
        r = np.linalg.norm(d, axis=1)
        m = r < self.radius
        if not np.any(m):
            return W
        k = 1.0 / self.magnification
        fac = k + (1.0 - k) * _smootherstep(r[m] / self.radius)
        x = c + d[m] * fac[:, None]
        s_old = np.sqrt(np.maximum(1.0 - np.sum(W[m, :2] ** 2, axis=1), 1e-300))
        s_new = np.sqrt(np.maximum(1.0 - np.sum(x * x, axis=1), 0.0))
        W[m, :2] = x
        W[m, 2:] *= (s_new / s_old)[:, None]
        return W


def handle_warp(a: ProjParam, grid: GridSpec) -> DiskWarp | None:
    """Warp concentrating lattice cells where the family's thin necks live, if any."""
    if grid.magnification == 1.0:
        return None
    b = a.affine()
    if b is None:
        return None
    s = b[1] ** 2 + b[2] ** 2
    if s >= 1.0:
        return None
    return DiskWarp((-b[2], -b[1]), (1.0 - math.sqrt(s)) / 2.0, grid.magnification)


def tangential_gradient(fun: Callable, W: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference ambient gradient projected onto the tangent space of S^3."""
    W = np.atleast_2d(W)
    G = np.empty_like(W)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        G[:, i] = (fun(W + e) - fun(W - e)) / (2 * h)
    return G - np.sum(G * W, axis=1, keepdims=True) * W


def _tangent_frame(w: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(np.column_stack([w, np.eye(4)]))
    return q[:, 1:4]


def find_singular_points(fun: Callable, S: TriSurface, scale: float, cell: float,
                         grad_tol: float = 1e-5, value_tol: float = 1e-7, max_clusters: int = 64) -> list:
    """Critical points of ``fun`` on its zero set near the mesh ``S``.

    Candidates are vertices whose tangential gradient is small relative to the
    surface median; each cluster is refined by least squares on
    ``(fun, grad_T fun) = 0`` and accepted when both residuals fall below the
    scale-relative tolerances.  Returns refined unit vectors.
    """
    if S.n_vertices == 0:
        return []
    g = np.linalg.norm(tangential_gradient(fun, S.vertices), axis=1)
    med = float(np.median(g))
    cand = np.flatnonzero(g < 0.05 * med)
    if cand.size == 0:
        return []
    cand = cand[np.argsort(g[cand])]
    clusters: list = []
    for i in cand:
        p = S.vertices[i]
        if all(np.linalg.norm(p - S.vertices[j]) > 4 * cell for j in clusters):
            clusters.append(i)
        if len(clusters) >= max_clusters:
            break
    found = []
    for i in clusters:
        w0 = S.vertices[i]
        B = _tangent_frame(w0)

        def point(y):
            w = w0 + B @ y
            return w / np.linalg.norm(w)

        def resid(y):
            w = point(y)[None]
            gt = tangential_gradient(fun, w)[0]
            return np.concatenate([[fun(w)[0]], gt]) / scale

        sol = optimize.least_squares(resid, np.zeros(3), xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=200)
        w = point(sol.x)
        if np.linalg.norm(w - w0) > 4 * cell:
            continue
        val = abs(fun(w[None])[0])
        gt = np.linalg.norm(tangential_gradient(fun, w[None])[0])
        if val < value_tol * scale and gt < grad_tol * scale:
            if all(np.linalg.norm(w - q) > cell for q in found):
                found.append(w)
    return found


def _lattice_scale(fun: Callable, n: int = 4096, seed: int = 7) -> float:
    X = np.random.default_rng(seed).standard_normal((n, 4))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return float(np.max(np.abs(fun(X))))


def extract_function(fun: Callable, grid: GridSpec = GridSpec(), warp: Callable | None = None,
                     detect_singular: bool = False, provenance=None) -> TriSurface:
    """Zero set of a vectorized function on S^3 as an oriented-consistent TriSurface."""
    inner = fun if warp is None else (lambda W: fun(warp(W)))
    V, T = marching_s3(inner, grid.lattice_n, grid.rotation())
    if T.shape[0] == 0:
        raise EmptySurface("no sign change of the defining function on the lattice")
    if warp is not None:
        V = warp(V)
    S = TriSurface(V, T, frozenset(), provenance, True)
    flip = _orientation_signs(S)
    if flip is not None:
        T = T.copy()
        T[flip] = T[flip][:, ::-1]
        S = S.replace(triangles=T)
    if detect_singular:
        scale = _lattice_scale(fun)
        pts = find_singular_points(fun, S, scale, grid.cell_size)
        if pts:
            marks = {int(np.argmin(vertex_distances(S, p))) for p in pts}
            S = S.with_marks(marks)
    return S


def extract(a: ProjParam, z: DiskParam, grid: GridSpec = GridSpec(), cfg: CutoffConfig = CutoffConfig(),
            detect_singular: bool = True) -> TriSurface:
    """Triangulates the member of the desingularized family at ``(a, z)``."""
    fun = lambda W: psi_ambient(a, z, W, cfg)
    return extract_function(fun, grid, handle_warp(a, grid), detect_singular, FamilyParam(a, z, cfg))


def extract_phi5(a: ProjParam, grid: GridSpec = GridSpec(), detect_singular: bool = True) -> TriSurface:
    """Triangulates the quadric member ``{phi5_a = 0}`` (no desingularizing term)."""
    fun = lambda W: phi5_ambient(a, W)
    return extract_function(fun, grid, handle_warp(a, grid), detect_singular, FamilyParam(a))


def surface_genus(S: TriSurface) -> int:
    """``genus`` for unmarked surfaces, ``punctate_genus`` otherwise."""
    return punctate_genus(S) if S.punctate_marks else genus(S)


# ---------------------------------------------------------------------------
# flat tori

def _torus_embed(U: np.ndarray, A: float, B: float) -> np.ndarray:
    """Isometric product embedding of the flat ``A x B`` torus in R^4."""
    ra, rb = A / (2 * math.pi), B / (2 * math.pi)
    ta, tb = 2 * math.pi * U[:, 0] / A, 2 * math.pi * U[:, 1] / B
    return np.column_stack([ra * np.cos(ta), ra * np.sin(ta), rb * np.cos(tb), rb * np.sin(tb)])


def torus_grid(m: int, n: int) -> np.ndarray:
    """Triangles of the periodic ``m x n`` grid (vertex ``i * n + j``)."""
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    i, j = i.ravel(), j.ravel()
    v00 = i * n + j
    v10 = ((i + 1) % m) * n + j
    v01 = i * n + (j + 1) % n
    v11 = ((i + 1) % m) * n + (j + 1) % n
    return np.vstack([np.column_stack([v00, v10, v11]), np.column_stack([v00, v11, v01])])


def flat_torus(A: float, B: float, m: int, n: int) -> TriSurface:
    """Flat ``A x B`` torus meshed by an ``m x n`` grid, embedded in R^4."""
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    U = np.column_stack([i.ravel() * A / m, j.ravel() * B / n])
    return TriSurface(_torus_embed(U, A, B), torus_grid(m, n), on_sphere=False)


def _staircase(m: int, n2: int) -> list:
    """Monotone lattice path from ``(0, 0)`` to ``(m, n2)`` hugging the straight segment."""
    path = [(0, 0)]
    i = j = 0
    while (i, j) != (m, n2):
        moves = [(i, j + 1)] if j < n2 else []
        if i < m:
            moves.append((i + 1, j))
        i, j = min(moves, key=lambda p: abs(p[1] * m - p[0] * n2))
        path.append((i, j))
    return path


def cut_along_path(S: TriSurface, path: Sequence[int]) -> TriSurface:
    """Cuts an oriented surface open along an open simple vertex path.

    Interior path vertices are split in two; faces on the right of the path
    move to the new copies.  Endpoints stay single, so the cut is a slit.
    """
    S = oriented(S)
    path = list(path)
    if len(path) < 3:
        return S
    T = S.triangles.copy()
    V = [S.vertices]
    nv = S.n_vertices
    on_path = {v: k for k, v in enumerate(path)}
    # faces around interior vertices, classified by which side of the path they sit
    vf: dict = {}
    for f, tri in enumerate(T.tolist()):
        for v in tri:
            if v in on_path and 0 < on_path[v] < len(path) - 1:
                vf.setdefault(v, []).append(f)
    for k in range(1, len(path) - 1):
        v, prev, nxt = path[k], path[k - 1], path[k + 1]
        right = _fan_side(S.triangles, vf[v], v, prev, nxt)
        V.append(S.vertices[v][None])
        for f in right:
            T[f][T[f] == v] = nv
        nv += 1
    return TriSurface(np.vstack(V), T, S.punctate_marks, S.provenance, S.on_sphere)


def _fan_side(T: np.ndarray, faces: list, v: int, a: int, b: int) -> list:
    """Faces of the fan at ``v`` met when rotating (with the orientation) from edge ``va`` to ``vb``."""
    # each face (v, x, y) in cyclic order contributes the rotation step x -> y
    step = {}
    for f in faces:
        tri = T[f].tolist()
        k = tri.index(v)
        x, y = tri[(k + 1) % 3], tri[(k + 2) % 3]
        step[x] = (y, f)
    out = []
    cur = a
    for _ in range(len(faces) + 1):
        if cur == b:
            return out
        if cur not in step:
            break
        cur, f = step[cur]
        out.append(f)
    raise ValueError(f"path edges at vertex {v} are not in one fan")


def slit_torus(L: float, grid: GridSpec | None = None, fraction: float = 0.9, cells_per_unit: int | None = None) -> TriSurface:
    """Flat torus with meridian ``L`` and longitude ``1/L``, slit along part of a closed geodesic.

    The slit follows (a lattice staircase along) the closed orbit of slope
    ``2 L^2``, which winds once around the longitude and twice around the
    meridian; ``fraction`` of it is removed.  With ``fraction = 0`` the plain
    flat torus is returned.
    """
    if L < 2 and fraction > 0:
        raise ValueError("slit torus needs L >= 2")
    res = cells_per_unit if cells_per_unit is not None else (grid.resolution // 2 if grid else 32)
    m = max(8, int(round(res / L)))       # cells around the longitude (length 1/L)
    n = max(8, int(round(res * L)))       # cells around the meridian (length L)
    T = flat_torus(1.0 / L, L, m, n)
    if fraction <= 0:
        return T
    stair = _staircase(m, 2 * n)
    verts = [(i % m) * n + (j % n) for i, j in stair[:-1]]
    keep = max(3, int(round(fraction * len(verts))))
    return cut_along_path(T, verts[:keep])


# ---------------------------------------------------------------------------
# OBJ export

def export_obj(S: TriSurface, pole) -> tuple:
    """OBJ bytes of the stereographic image from ``pole`` and the raw ``.r4`` sidecar bytes."""
    pole = np.asarray(pole.array if hasattr(pole, "array") else pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    if not S.on_sphere:
        raise ValueError("stereographic export needs a surface in S^3")
    clearance = 0.5 * S.mean_edge_length() if S.n_edges else 1e-9
    if S.n_vertices and float(np.min(vertex_distances(S, pole))) < max(clearance, 1e-9):
        raise PoleOnSurface("projection pole lies on the surface")
    X = stereographic(S.vertices, pole)
    obj = io.StringIO()
    for x in X:
        obj.write(f"v {x[0]:.17g} {x[1]:.17g} {x[2]:.17g}\n")
    for t in S.triangles + 1:
        obj.write(f"f {t[0]} {t[1]} {t[2]}\n")
    r4 = io.StringIO()
    for w in S.vertices:
        r4.write(" ".join(f"{c:.17g}" for c in w) + "\n")
    return obj.getvalue().encode(), r4.getvalue().encode()


def read_obj(data: bytes, r4: bytes | None = None) -> TriSurface:
    """Parses ``v``/``f`` records; with an ``.r4`` sidecar the 4-coordinates are restored."""
    V, T = [], []
    for line in data.decode().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            V.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            T.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    if r4 is not None:
        W = np.array([[float(x) for x in ln.split()] for ln in r4.decode().splitlines() if ln.strip()])
        return TriSurface(W, np.array(T, dtype=np.int64), on_sphere=True)
    return TriSurface(np.array(V), np.array(T, dtype=np.int64), on_sphere=False)


def cut_along_cycle(S: TriSurface, cycle: Sequence[int]) -> tuple:
    """Cuts an oriented surface along a simple closed vertex cycle.

    Every cycle vertex is duplicated; the copies take the faces on the right
    of the cycle.  Returns ``(surface, left_loop, right_loop, origin)`` where
    the loops list the vertices bounding each side and ``origin`` maps new
    vertex ids to the ids of ``S``.
    """
    cycle = list(cycle)
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        raise ValueError("cycle must list at least 3 distinct vertices")
    T = S.triangles.copy()
    pos = {v: i for i, v in enumerate(cycle)}
    vf: dict = {}
    for f, tri in enumerate(S.triangles.tolist()):
        for v in tri:
            if v in pos:
                vf.setdefault(v, []).append(f)
    nv = S.n_vertices
    new_ids = []
    for i, v in enumerate(cycle):
        right = _fan_side(S.triangles, vf[v], v, cycle[i - 1], cycle[(i + 1) % k])
        for f in right:
            T[f][T[f] == v] = nv + i
        new_ids.append(nv + i)
    V = np.vstack([S.vertices, S.vertices[cycle]])
    origin = np.concatenate([np.arange(nv), np.asarray(cycle, dtype=np.int64)])
    out = TriSurface(V, T, S.punctate_marks, S.provenance, S.on_sphere)
    return out, cycle, new_ids, origin


def cap_loop(S: TriSurface, loop: Sequence[int], reverse: bool = False) -> tuple:
    """Caps one boundary loop with a fan; returns ``(surface, cap face ids)``."""
    loop = list(loop)[::-1] if reverse else list(loop)
    c = S.positions_on_surface(S.vertices[loop].mean(axis=0)[None])
    k = len(loop)
    nv, nf = S.n_vertices, S.n_faces
    fan = np.array([[nv, loop[i], loop[(i + 1) % k]] for i in range(k)], dtype=np.int64)
    out = TriSurface(np.vstack([S.vertices, c]), np.vstack([S.triangles, fan]),
                     S.punctate_marks, S.provenance, S.on_sphere)
    return out, np.arange(nf, nf + k)
