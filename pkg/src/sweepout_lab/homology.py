"""Z/2 first homology of triangulated surfaces, homological systoles and short loops."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order, dijkstra

from .errors import (DiskNotSimplyConnected, NoNontrivialCycle, NotACycle, StuckNoCycle)
from .mesh import (TriSurface, cap_boundaries, cap_loop, component_genera, compact, cut_along_cycle,
                   euler_characteristic, genus, oriented)


@dataclass(frozen=True)
class Z2Chain:
    """A set of edge ids of a fixed TriSurface, read as a Z/2 1-chain."""

    edges: frozenset = frozenset()

    def __init__(self, edges: Iterable[int] = ()):
        object.__setattr__(self, "edges", frozenset(int(e) for e in edges))

    def __add__(self, other: "Z2Chain") -> "Z2Chain":
        return Z2Chain(self.edges ^ other.edges)

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    @property
    def array(self) -> np.ndarray:
        return np.array(sorted(self.edges), dtype=np.int64)

    def vertex_degrees(self, S: TriSurface) -> np.ndarray:
        if not self.edges:
            return np.zeros(S.n_vertices, dtype=np.int64)
        return np.bincount(S.edges[self.array].reshape(-1), minlength=S.n_vertices)

    def is_cycle(self, S: TriSurface) -> bool:
        return bool(np.all(self.vertex_degrees(S) % 2 == 0))

    def length(self, S: TriSurface) -> float:
        return float(S.edge_lengths[self.array].sum()) if self.edges else 0.0


def chain_from_vertex_cycle(S: TriSurface, verts: Sequence[int], closed: bool = True) -> Z2Chain:
    verts = np.asarray(list(verts), dtype=np.int64)
    nxt = np.roll(verts, -1) if closed else verts[1:]
    ids = edge_ids(S, verts[:len(nxt)], nxt)
    if np.any(ids < 0):
        raise ValueError("consecutive vertices are not joined by an edge")
    out = set()
    for e in ids.tolist():
        out ^= {e}
    return Z2Chain(out)


def boundary_of_faces(S: TriSurface, faces: Iterable[int]) -> Z2Chain:
    faces = np.fromiter(faces, dtype=np.int64)
    if faces.size == 0:
        return Z2Chain()
    cnt = np.bincount(S.face_edges[faces].reshape(-1), minlength=S.n_edges)
    return Z2Chain(np.flatnonzero(cnt % 2 == 1))


# ---------------------------------------------------------------------------
# tree-cotree basis

@dataclass
class H1Basis:
    cycles: list                 # primal generators gamma_i
    cocycles: list               # dual cocycles with <gamma*_j, gamma_i> = delta_ij
    pairing: np.ndarray          # Z/2 intersection matrix of the cycles
    edge_classes: np.ndarray = field(repr=False, default=None)  # bitmask of cocycles containing each edge

    @property
    def rank(self) -> int:
        return len(self.cycles)


def _spanning_forest(n: int, pairs: np.ndarray, ids: np.ndarray) -> tuple:
    """BFS forest over ``n`` nodes; returns ``(parent, parent edge id)`` with -1 at roots."""
    parent = np.full(n, -1, dtype=np.int64)
    pedge = np.full(n, -1, dtype=np.int64)
    if len(pairs) == 0:
        return parent, pedge
    # parallel edges would be summed by the sparse constructor; keep one of each
    _, first = np.unique(np.sort(pairs, axis=1), axis=0, return_index=True)
    pairs, ids = pairs[first], ids[first]
    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
    eids = np.concatenate([ids, ids]) + 1  # +1 keeps edge 0 a stored entry
    g = sparse.csr_matrix((eids, (rows, cols)), shape=(n, n))
    seen = np.zeros(n, dtype=bool)
    for root in range(n):
        if seen[root]:
            continue
        order, pred = breadth_first_order(g, root, directed=False, return_predecessors=True)
        seen[order] = True
        child = order[1:]
        parent[child] = pred[child]
        pedge[child] = np.asarray(g[pred[child], child]).reshape(-1).astype(np.int64) - 1
    return parent, pedge


def _tree_path_edges(parent, pedge, u, v) -> set:
    """Edge ids on the forest path between ``u`` and ``v`` (same tree)."""
    anc_u = {}
    x, d = u, 0
    while x >= 0:
        anc_u[x] = d
        x = parent[x]
        d += 1
    path = set()
    y = v
    while y not in anc_u:
        path ^= {int(pedge[y])}
        y = parent[y]
    x = u
    while x != y:
        path ^= {int(pedge[x])}
        x = parent[x]
    return path


def cup_product_form(S: TriSurface, cocycles: Sequence[Z2Chain]) -> np.ndarray:
    """``<phi_a cup phi_b, [S]>`` mod 2 for Z/2 1-cocycles given as edge sets."""
    k = len(cocycles)
    T = np.sort(S.triangles, axis=1)
    e01 = edge_ids(S, T[:, 0], T[:, 1])
    e12 = edge_ids(S, T[:, 1], T[:, 2])
    ind = np.zeros((k, S.n_edges), dtype=np.int64)
    for i, c in enumerate(cocycles):
        ind[i, c.array] = 1
    Q = (ind[:, e01] @ ind[:, e12].T) % 2
    return Q


def z2_inverse(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    A = np.concatenate([M.astype(np.int64) % 2, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = np.flatnonzero(A[col:, col])
        if piv.size == 0:
            raise np.linalg.LinAlgError("matrix is singular over Z/2")
        p = col + piv[0]
        A[[col, p]] = A[[p, col]]
        rows = np.flatnonzero(A[:, col])
        rows = rows[rows != col]
        A[rows] ^= A[col]
    return A[:, n:]


def z2_rank(vectors: Iterable[int]) -> int:
    """Rank over Z/2 of integer bitmask vectors."""
    basis: list = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def h1_basis(S: TriSurface) -> H1Basis:
    """Tree-cotree generators of ``H_1(S; Z/2)`` for a closed surface, with dual cocycles."""
    if not S.is_closed and S.n_faces:
        raise ValueError("h1_basis needs a closed surface")
    nE = S.n_edges
    parent, pedge = _spanning_forest(S.n_vertices, S.edges, np.arange(nE))
    in_tree = np.zeros(nE, dtype=bool)
    in_tree[pedge[pedge >= 0]] = True
    rest = np.flatnonzero(~in_tree)
    ef = S.edge_faces
    fparent, fpedge = _spanning_forest(S.n_faces, ef[rest], rest)
    in_cotree = np.zeros(nE, dtype=bool)
    in_cotree[fpedge[fpedge >= 0]] = True
    leftover = np.flatnonzero(~in_tree & ~in_cotree)
    cycles, cocycles = [], []
    for e in leftover.tolist():
        u, v = S.edges[e]
        cycles.append(Z2Chain(_tree_path_edges(parent, pedge, int(u), int(v)) ^ {e}))
        f, g = ef[e]
        cocycles.append(Z2Chain(_tree_path_edges(fparent, fpedge, int(f), int(g)) ^ {e}))
    k = len(cycles)
    if k:
        Q = cup_product_form(S, cocycles)
        pairing = z2_inverse(Q)
    else:
        pairing = np.zeros((0, 0), dtype=np.int64)
    if k > 62:
        raise ValueError("class bitmasks support rank up to 62")
    classes = np.zeros(nE, dtype=np.int64)
    for i, c in enumerate(cocycles):
        classes[c.array] |= np.int64(1) << i
    return H1Basis(cycles, cocycles, pairing, classes)


def class_vector(S: TriSurface, basis: H1Basis, c: Z2Chain) -> np.ndarray:
    """Coordinates of ``[c]`` in the basis (evaluation on the dual cocycles)."""
    if not c.is_cycle(S):
        raise NotACycle("chain has a vertex of odd degree")
    arr = c.array
    return np.array([len(np.intersect1d(arr, cc.array, assume_unique=True)) % 2 for cc in basis.cocycles],
                    dtype=np.int64)


def class_mask(S: TriSurface, basis: H1Basis, c: Z2Chain) -> int:
    vec = class_vector(S, basis, c)
    return int(sum(int(b) << i for i, b in enumerate(vec)))


def is_trivial(S: TriSurface, basis: H1Basis, c: Z2Chain) -> bool:
    return not np.any(class_vector(S, basis, c))


def intersection_number(S: TriSurface, basis: H1Basis, c1: Z2Chain, c2: Z2Chain) -> int:
    x, y = class_vector(S, basis, c1), class_vector(S, basis, c2)
    return int(x @ basis.pairing @ y % 2)


# ---------------------------------------------------------------------------
# systole

@dataclass
class _Prepared:
    surface: TriSurface          # closed surface the search runs on
    basis: H1Basis
    n_orig_vertices: int
    orig_edge: np.ndarray        # edge id of the input surface per working edge, -1 for cap edges
    forbidden_edges: np.ndarray  # bool per working edge


def _prepare(S: TriSurface, forbidden: Iterable[int]) -> _Prepared:
    forbidden = np.fromiter(forbidden, dtype=np.int64)
    W = S
    cap_faces = np.array([], dtype=np.int64)
    if not S.is_closed:
        W, caps = cap_boundaries(S)
        cap_faces = np.concatenate(caps) if caps else cap_faces
    basis = h1_basis(W)
    bad = np.zeros(W.n_edges, dtype=bool)
    all_forbidden = np.concatenate([forbidden, cap_faces])
    if all_forbidden.size:
        bad[W.face_edges[all_forbidden].reshape(-1)] = True
    orig = edge_ids(S, W.edges[:, 0], W.edges[:, 1]) if S.n_edges else np.full(W.n_edges, -1)
    orig = np.where(W.edges[:, 1] < S.n_vertices, orig, -1)
    return _Prepared(W, basis, S.n_vertices, orig, bad)


def edge_ids(S: TriSurface, u, v) -> np.ndarray:
    """Vectorized edge id lookup for vertex pairs (``-1`` where no edge exists)."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    n = np.int64(S.n_vertices)
    keys = S.edges[:, 0] * n + S.edges[:, 1]  # sorted, since edges come from np.unique
    q = lo * n + hi
    pos = np.clip(np.searchsorted(keys, q), 0, max(len(keys) - 1, 0))
    return np.where(keys[pos] == q, pos, -1) if len(keys) else np.full(q.shape, -1)


def _ball_search(G, S_edges_keys, n, r, limit, cls, w, E, by_low):
    """Shortest nontrivial loop through root ``r`` from its shortest-path tree.

    ``by_low`` is ``(indptr, edge ids)`` listing allowed edges at their lower
    endpoint.  Returns ``(length, sorted chain edge ids)`` or ``None``.
    """
    dist, pred = dijkstra(G, directed=True, indices=r, return_predecessors=True, limit=limit)
    R = np.flatnonzero(np.isfinite(dist))
    loc = np.full(n, -1, dtype=np.int64)
    loc[R] = np.arange(R.size)
    p = pred[R].astype(np.int64)
    has = p >= 0
    pe = np.full(R.size, -1, dtype=np.int64)
    lo, hi = np.minimum(R[has], p[has]), np.maximum(R[has], p[has])
    pe[has] = np.searchsorted(S_edges_keys, lo * n + hi)
    # class of the tree path to the root, by pointer jumping over the ball
    anc = np.where(has, loc[np.where(has, p, r)], np.arange(R.size))
    acc = np.where(has, cls[np.where(has, pe, 0)], 0)
    for _ in range(int(np.ceil(np.log2(max(R.size, 2)))) + 1):
        acc = acc ^ acc[anc]
        anc = anc[anc]
    indptr, eids = by_low
    starts, counts = indptr[R], indptr[R + 1] - indptr[R]
    tot = int(counts.sum())
    if tot == 0:
        return None
    offs = np.repeat(starts - np.cumsum(counts) + counts, counts) + np.arange(tot)
    cand = eids[offs]
    cand = cand[loc[E[cand, 1]] >= 0]
    if cand.size == 0:
        return None
    ce, cu, cv = cand, E[cand, 0], E[cand, 1]
    nontriv = (acc[loc[cu]] ^ acc[loc[cv]] ^ cls[ce]) != 0
    if not np.any(nontriv):
        return None
    total = np.where(nontriv, dist[cu] + w[ce] + dist[cv], np.inf)
    m = float(total.min())
    out = []
    for j in np.flatnonzero(total <= m + 1e-12 * (1 + m)):
        chain = {int(ce[j])}
        for x in (int(cu[j]), int(cv[j])):
            k = loc[x]
            while pe[k] >= 0:
                chain ^= {int(pe[k])}
                k = loc[p[k]]
        out.append((float(w[list(chain)].sum()), tuple(sorted(chain))))
    return min(out)


def systole(S: TriSurface, forbidden: Iterable[int] = ()) -> tuple:
    """Shortest edge cycle with nonzero Z/2 class avoiding edges of ``forbidden`` faces.

    Surfaces with boundary are handled by capping every boundary circle and
    forbidding the caps, so classes are measured in the capped surface.
    Returns ``(Z2Chain on S, length)``.
    """
    P = _prepare(S, forbidden)
    W, basis = P.surface, P.basis
    if basis.rank == 0:
        raise NoNontrivialCycle("surface has genus 0")
    cls = basis.edge_classes.astype(np.int64)
    ok = ~P.forbidden_edges
    E = W.edges
    w = W.edge_lengths
    n = W.n_vertices
    # every nontrivial cycle pairs with some cocycle, so it passes through a cocycle edge endpoint
    roots = set()
    for cc in basis.cocycles:
        arr = cc.array
        arr = arr[ok[arr]]
        roots.update(E[arr].reshape(-1).tolist())
    if not roots:
        raise NoNontrivialCycle("all cocycle edges are forbidden")
    ids = np.flatnonzero(ok)
    rows = np.concatenate([E[ids, 0], E[ids, 1]])
    cols = np.concatenate([E[ids, 1], E[ids, 0]])
    # tiny offset keeps zero-length edges as stored entries
    G = sparse.csr_matrix((np.concatenate([w[ids], w[ids]]) + 1e-300, (rows, cols)), shape=(n, n))
    keys = E[:, 0] * np.int64(n) + E[:, 1]
    order = ids[np.argsort(E[ids, 0], kind="stable")]
    indptr = np.concatenate([[0], np.cumsum(np.bincount(E[ids, 0], minlength=n))])
    by_low = (indptr, order)
    best = None
    for r in sorted(roots):
        limit = best[0] / 2 + 1e-12 if best is not None else np.inf
        found = _ball_search(G, keys, n, r, limit, cls, w, E, by_low)
        if found is None:
            continue
        if best is None or found[0] < best[0] - 1e-12 * (1 + found[0]) or (
                abs(found[0] - best[0]) <= 1e-12 * (1 + found[0]) and found[1] < best[1]):
            best = found
    best_chain = None if best is None else best[1]
    if best_chain is None:
        raise NoNontrivialCycle("no nontrivial cycle avoids the forbidden faces")
    out = Z2Chain(P.orig_edge[list(best_chain)])
    return out, float(S.edge_lengths[out.array].sum())


# ---------------------------------------------------------------------------
# bypass

def _check_disk(S: TriSurface, disk: np.ndarray) -> None:
    sub, _ = compact(S, disk)
    if sub.n_faces == 0:
        raise DiskNotSimplyConnected("empty disk")
    ncomp = np.unique(sub.face_labels()).size
    if ncomp != 1 or euler_characteristic(sub) != 1:
        raise DiskNotSimplyConnected("face set is not a single disk (chi != 1)")
    B = sub.edges[sub.boundary_edges]
    if B.size == 0 or np.any(np.bincount(B.reshape(-1)) > 2):
        raise DiskNotSimplyConnected("disk boundary is not a simple circle")


def bypass(S: TriSurface, c: Z2Chain, disks: Sequence[Iterable[int]], basis: H1Basis | None = None) -> Z2Chain:
    """Reroutes the cycle ``c`` around each disk along the shorter side of its boundary.

    Faces of a disk are two-colored so that adjacent faces differ exactly
    across edges of ``c``; adding the boundary of either color class removes
    every interior edge of ``c`` without changing its class.
    """
    if not c.is_cycle(S):
        raise NotACycle("input chain is not a cycle")
    out = set(c.edges)
    ef = S.edge_faces
    for disk in disks:
        disk = np.unique(np.fromiter(disk, dtype=np.int64))
        _check_disk(S, disk)
        in_disk = np.zeros(S.n_faces, dtype=bool)
        in_disk[disk] = True
        color = {}
        start = int(disk[0])
        color[start] = 0
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for e in S.face_edges[f].tolist():
                g = int(ef[e, 0] if ef[e, 1] == f else ef[e, 1])
                if g < 0 or not in_disk[g]:
                    continue
                col = color[f] ^ (1 if e in out else 0)
                if g not in color:
                    color[g] = col
                    queue.append(g)
                elif color[g] != col:
                    raise DiskNotSimplyConnected("inconsistent two-coloring; disk has a hole")
        best = None
        for side in (0, 1):
            cls_faces = [f for f, col in color.items() if col == side]
            cand = out ^ set(boundary_of_faces(S, cls_faces).edges)
            length = float(S.edge_lengths[list(cand)].sum()) if cand else 0.0
            key = (length, side)
            if best is None or key < best[0]:
                best = (key, cand)
        out = best[1]
    return Z2Chain(out)


def disk_interior_edges(S: TriSurface, disk: Iterable[int]) -> np.ndarray:
    disk = np.fromiter(disk, dtype=np.int64)
    cnt = np.bincount(S.face_edges[disk].reshape(-1), minlength=S.n_edges)
    return np.flatnonzero(cnt == 2)


# ---------------------------------------------------------------------------
# simple cycles and short loops

def simple_cycles(S: TriSurface, c: Z2Chain) -> list:
    """Splits a Z/2 cycle into edge-disjoint simple vertex cycles."""
    if not c.is_cycle(S):
        raise NotACycle("chain has a vertex of odd degree")
    adj: dict = {}
    for e in c:
        u, v = (int(x) for x in S.edges[e])
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    used = set()
    cycles = []
    for start in sorted(adj):
        while any(e not in used for _, e in adj[start]):
            # walk until a vertex repeats, then peel off the closed part
            stack = [start]
            where = {start: 0}
            x = start
            while True:
                nxt = next((y, e) for y, e in adj[x] if e not in used)
                y, e = nxt
                used.add(e)
                if y in where:
                    k = where[y]
                    cycles.append(stack[k:])
                    for z in stack[k + 1:]:
                        del where[z]
                    stack = stack[:k + 1]
                    x = y
                    if x == start and len(stack) == 1:
                        break
                    continue
                where[y] = len(stack)
                stack.append(y)
                x = y
    return cycles


@dataclass
class ShortLoopResult:
    loops: list                 # Z2Chain on the input surface
    lengths: list
    working: TriSurface         # input after pinching along all loops
    residual_genus: int


def independent_short_loops(S: TriSurface, target_g: int, forbidden: Sequence[Iterable[int]] = ()) -> ShortLoopResult:
    """Greedy short loops with independent classes, pinching the surface along each one.

    Each round takes the shortest nontrivial loop of the current surface in
    the complement of all forbidden faces (the input disks plus the caps of
    earlier rounds), pinches the surface along a nontrivial simple piece of it
    and forbids the two new caps.  The input surface is not modified.
    """
    W = oriented(S)
    origin = np.arange(S.n_vertices)
    forb = set()
    for d in forbidden:
        forb.update(int(f) for f in d)
    loops, lengths = [], []
    for _ in range(target_g):
        try:
            chain, _ = systole(W, forb)
        except NoNontrivialCycle as exc:
            raise StuckNoCycle(str(exc)) from exc
        basis = h1_basis(W)
        pick = None
        for cyc in simple_cycles(W, chain):
            ch = chain_from_vertex_cycle(W, cyc)
            if not is_trivial(W, basis, ch):
                pick = cyc
                break
        if pick is None:
            raise StuckNoCycle("no simple nontrivial piece in the short cycle")
        loops.append(chain_from_vertex_cycle(S, origin[pick]))
        lengths.append(float(chain_from_vertex_cycle(W, pick).length(W)))
        W, left, right, org = cut_along_cycle(W, pick)
        origin = origin[org]
        W, cap1 = cap_loop(W, left, reverse=True)
        W, cap2 = cap_loop(W, right, reverse=False)
        origin = np.concatenate([origin, [-1, -1]])
        forb.update(cap1.tolist())
        forb.update(cap2.tolist())
    res = int(component_genera(W).sum())
    return ShortLoopResult(loops, lengths, W, res)
