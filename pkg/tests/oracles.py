"""Independent reference computations used by several test modules."""

import networkx as nx
import numpy as np
from scipy.optimize import root


class BoundarySpace:
    """Z/2 span of face boundaries, kept as reduced bitsets keyed by pivot bit."""

    def __init__(self, S):
        self.rows = {}
        for fe in S.face_edges:
            self._insert(sum(1 << int(e) for e in set(fe.tolist())))

    def reduce(self, x):
        while x:
            p = x.bit_length() - 1
            if p not in self.rows:
                return x
            x ^= self.rows[p]
        return 0

    def _insert(self, x):
        x = self.reduce(x)
        if x:
            self.rows[x.bit_length() - 1] = x

    def is_boundary(self, edges):
        return self.reduce(sum(1 << int(e) for e in edges)) == 0


def brute_force_systole(S):
    """Shortest nontrivial Z/2 cycle via fundamental cycles of every shortest-path tree."""
    space = BoundarySpace(S)
    G = nx.Graph()
    w = S.edge_lengths
    for e, (u, v) in enumerate(S.edges.tolist()):
        G.add_edge(u, v, weight=float(w[e]), id=e)
    best = np.inf
    for r in G.nodes:
        dist, paths = nx.single_source_dijkstra(G, r)
        tree = set()
        path_edges = {}
        for v, p in paths.items():
            ids = frozenset(G[a][b]["id"] for a, b in zip(p, p[1:]))
            path_edges[v] = ids
            if len(p) > 1:
                tree.add(G[p[-2]][p[-1]]["id"])
        for e, (u, v) in enumerate(S.edges.tolist()):
            if e in tree:
                continue
            L = dist[u] + dist[v] + w[e]
            if L >= best:
                continue
            chain = set(path_edges[u] ^ path_edges[v]) ^ {e}
            if not space.is_boundary(chain):
                best = min(best, float(w[list(chain)].sum()))
    return best


def saddle_oracle(b, n=13, span=4.0):
    """Multistart Newton on the gradient of |x - b|^2 over the graph x3 = x1 x2."""
    def grad(u):
        x1, x2 = u
        d = np.array([x1 - b[0], x2 - b[1], x1 * x2 - b[2]])
        return [d[0] + d[2] * x2, d[1] + d[2] * x1]
    found = []
    for s1 in np.linspace(-span, span, n):
        for s2 in np.linspace(-span, span, n):
            sol = root(grad, [s1, s2], tol=1e-13)
            if sol.success and np.linalg.norm(grad(sol.x)) < 1e-9:
                if all(np.linalg.norm(sol.x - y) > 1e-5 for y in found):
                    found.append(sol.x)
    return len(found)


def hyperbola_oracle(b):
    """Sign changes of d/dx1 |x - b|^2 along both branches x2 = 1/x1, x3 = b3."""
    cnt = 0
    for sgn in (1, -1):
        t = sgn * np.geomspace(1e-3, 1e3, 200001)
        g = (t - b[0]) - (1 / t - b[1]) / t ** 2
        cnt += int(np.sum(np.sign(g[1:]) != np.sign(g[:-1])))
    return cnt
