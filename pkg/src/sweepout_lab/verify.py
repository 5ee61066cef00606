"""Property suites behind ``sweepout-lab verify``; each check yields a pass flag and a short detail."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import GenusIncreased, NoCenter, SweepoutError, UnresolvedZero
from .family import (CENTRAL, HYPERBOLA, SADDLE, CutoffConfig, DiskParam, ProjParam, critical_count, f_profile)
from .homology import bypass, h1_basis, is_trivial, systole
from .links import (central_loop, hopf_loops, hopf_pair, linking_number, sign_separation, small_circle,
                    zero_monodromy)
from .mesh import flat_torus, slit_torus
from .s3geom import TWO_PI
from .surgery import (annulus_ok, annulus_radius_search, apply_process, check_disjoint_balls, disjoint_balls,
                      random_event)
from .trigpoly import TrigPoly, circle_distance, ord as trig_ord, zero_sum

SUITES = ("family", "trig", "loops", "surgery", "links")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def random_valid_member(rng: np.random.Generator, r: float | None = None) -> tuple:
    """A parameter pair near the singular locus, where the zero count of ``f`` is nontrivial."""
    u, v = rng.normal(size=2) * 0.2
    a = ProjParam(u * v + rng.normal() * 1e-3, u, v, rng.normal() * 1e-3, rng.normal() * 1e-3, 1.0)
    rr = math.sqrt(rng.uniform()) if r is None else r
    return a, DiskParam(rr, rng.uniform(0, TWO_PI))


def random_omega_member(rng: np.random.Generator) -> tuple:
    """A pair with ``|z| = 1`` close to the central point."""
    u, v = rng.normal(size=2) * 0.1
    return ProjParam(u * v + rng.normal() * 1e-4, u, v, 0, 0, 1), DiskParam(1.0, rng.uniform(0, TWO_PI))


def suite_family(n_random: int = 500, seed: int = 0) -> list:
    out = []
    cfg = CutoffConfig()
    ok = True
    for k in range(8):
        p = f_profile(CENTRAL, DiskParam(1.0, TWO_PI * k / 8), cfg)
        ok &= p.total_order == 4 and p.orders == [1, 1, 1, 1]
    out.append(Check("central |z|=1 has 4 simple zeros", bool(ok)))
    p = f_profile(CENTRAL, DiskParam(0.0), cfg)
    out.append(Check("central z=0 has 6 zeros", p.total_order == 6, str(p.zeros)))
    rng = np.random.default_rng(seed)
    worst, worst_r1, skipped = 0, 0, 0
    for k in range(n_random):
        a, z = random_valid_member(rng, 1.0 if k % 4 == 0 else None)
        try:
            t = f_profile(a, z, cfg).total_order
        except (NoCenter, UnresolvedZero):
            skipped += 1
            continue
        worst = max(worst, t)
        if z.r == 1.0:
            worst_r1 = max(worst_r1, t)
    out.append(Check("zero order <= 6 on random members", worst <= 6, f"max={worst} skipped={skipped}"))
    out.append(Check("zero order <= 4 when r = 1", worst_r1 <= 4, f"max={worst_r1}"))
    mx = 0
    for k in range(1000):
        b = rng.normal(size=3) * 2
        mx = max(mx, critical_count(SADDLE, b), critical_count(HYPERBOLA, b))
    out.append(Check("critical points <= 9", mx <= 9, f"max={mx}"))
    out.append(Check("saddle at b=0 has 1 critical point", critical_count(SADDLE, [0, 0, 0]) == 1))
    return out


def random_trig(rng: np.random.Generator, kmax: int = 5) -> TrigPoly:
    k = int(rng.integers(1, kmax + 1))
    b = rng.normal(size=k + 1)
    b[0] *= rng.uniform(0, 1)
    return TrigPoly(b, rng.uniform(0, TWO_PI, size=k))


def suite_trig(n: int = 1000, seed: int = 1) -> list:
    rng = np.random.default_rng(seed)
    bad_ord, bad_sum, full = 0, 0, 0
    for _ in range(n):
        T = random_trig(rng)
        o = trig_ord(T)
        bad_ord += o > 2 * T.k
        if o == 2 * T.k:
            full += 1
            bad_sum += circle_distance(zero_sum(T), -2 * T.theta[-1]) >= 1e-6
    return [Check("ord(T) <= 2k", bad_ord == 0, f"violations={bad_ord}/{n}"),
            Check("zero sum = -2 theta_k at full order", bad_sum == 0, f"violations={bad_sum}/{full}")]


def grow_disk(S, seed_face: int, size: int, rng: np.random.Generator) -> np.ndarray | None:
    """A random face set grown from ``seed_face``; ``None`` unless it is a disk with a simple boundary."""
    from .homology import _check_disk

    ef = S.edge_faces
    disk, frontier = {seed_face}, [seed_face]
    while frontier and len(disk) < size:
        f = frontier.pop(int(rng.integers(len(frontier))))
        for e in S.face_edges[f].tolist():
            g = int(ef[e, 0] if ef[e, 1] == f else ef[e, 1])
            if g >= 0 and g not in disk and len(disk) < size:
                disk.add(g)
                frontier.append(g)
    out = np.array(sorted(disk))
    try:
        _check_disk(S, out)
    except SweepoutError:
        return None
    return out


def random_bypass_instance(S, basis, rng: np.random.Generator) -> tuple:
    """A nontrivial cycle and 1-3 pairwise disjoint disks, each meeting the cycle."""
    from .homology import Z2Chain

    while True:
        mask = int(rng.integers(1, 2 ** basis.rank))
        c = Z2Chain(set())
        for i in range(basis.rank):
            if mask >> i & 1:
                c = c + basis.cycles[i]
        verts = np.unique(S.edges[c.array])
        used = np.zeros(S.n_vertices, dtype=bool)
        disks = []
        for _ in range(int(rng.integers(1, 4))):
            v = int(rng.choice(verts))
            star = np.flatnonzero(np.any(S.triangles == v, axis=1))
            d = grow_disk(S, int(rng.choice(star)), int(rng.integers(4, 30)), rng)
            if d is None or used[S.triangles[d]].any():
                continue
            used[S.triangles[d]] = True
            # keep a one-ring gap between disks
            ring = np.any(used[S.triangles], axis=1)
            used[S.triangles[ring]] = True
            disks.append(d)
        if disks:
            return c, disks


def check_bypass(n: int = 100, seed: int = 4) -> tuple:
    """Randomized bypass instances; returns ``(failures, details)``."""
    from .homology import boundary_of_faces, disk_interior_edges
    from .shapes import torus_chain, torus_r3

    rng = np.random.default_rng(seed)
    meshes = [torus_r3(1, 0.35, 24, 10), torus_chain(2, n=28)]
    bases = [h1_basis(S) for S in meshes]
    bad = []
    for k in range(n):
        S, B = meshes[k % 2], bases[k % 2]
        c, disks = random_bypass_instance(S, B, rng)
        out = bypass(S, c, disks, B)
        inside = set()
        for d in disks:
            inside.update(disk_interior_edges(S, d).tolist())
        bound = c.length(S) + sum(boundary_of_faces(S, d).length(S) for d in disks) + S.edge_lengths.max()
        ok = is_trivial(S, B, out + c) and not inside & set(out.edges) and out.length(S) < bound
        if not ok:
            bad.append(k)
    return len(bad), bad


def suite_loops() -> list:
    out = []
    T = flat_torus(2.0, 0.5, 64, 16)
    _, L = systole(T)
    out.append(Check("flat 2x0.5 torus systole ~ 0.5", abs(L - 0.5) <= 0.025, f"{L:.5f}"))
    S = slit_torus(4.0)
    _, L4 = systole(S)
    h = float(S.edge_lengths.max())
    out.append(Check("slit torus L=4 systole >= 4 - edge", L4 >= 4 - h, f"{L4:.4f} (edge {h:.4f})"))
    B = h1_basis(T)
    out.append(Check("basis cycle nontrivial", not is_trivial(T, B, B.cycles[0])))
    nbad, _ = check_bypass(40)
    out.append(Check("bypass homologous, avoids disks, bounded length", nbad == 0, f"failures={nbad}/40"))
    return out


def fuzz_genus(n_runs: int, rng: np.random.Generator, max_events: int = 4) -> int:
    """Random valid pinch-off sequences; returns how many hit a genus increase."""
    from .shapes import disjoint_union, icosphere, torus_r3

    bad = 0
    for _ in range(n_runs):
        S = disjoint_union(torus_r3(1, 0.35, 12, 6), icosphere(1))
        for _ in range(int(rng.integers(1, max_events + 1))):
            try:
                S, _ = apply_process(S, [random_event(S, rng)])
            except GenusIncreased:
                bad += 1
                break
    return bad


def check_balls(n: int, rng: np.random.Generator) -> int:
    """disjoint_balls on random clustered centers; returns the number of postcondition failures."""
    fails = 0
    for _ in range(n):
        q, k = int(rng.integers(1, 6)), int(rng.integers(1, 4))
        zeta = math.pi / (2 * k * (3 * k) ** q) * rng.uniform(0.01, 0.99)
        c0 = rng.normal(size=4)
        P = c0 / np.linalg.norm(c0) + rng.normal(size=(q, 4)) * zeta * k * rng.uniform(0.5, 20)
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        fails += bool(check_disjoint_balls(list(P), zeta, k, disjoint_balls(list(P), zeta, k, q)))
    return fails


def check_annulus(n: int, rng: np.random.Generator) -> int:
    """annulus_radius_search on random multi-scale point sets; returns the number of failures."""
    fails = 0
    for _ in range(n):
        q, N = int(rng.integers(2, 6)), int(rng.integers(1, 3))
        P = rng.normal(size=(q, 4))
        P = np.array([0, 0, 0, 1.0]) + P * 10.0 ** rng.uniform(-12, -1, size=(q, 1))
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        R = annulus_radius_search(list(P), q, N, 0.5)
        fails += not (annulus_ok(list(P), N, R) and 5.0 ** (-2 * N * q * q) * 0.5 < R < 5.0 ** (-2 * N) * 0.5)
    return fails


def suite_surgery(n_fuzz: int = 200, seed: int = 2) -> list:
    rng = np.random.default_rng(seed)
    bad = fuzz_genus(n_fuzz, rng)
    fb, fa = check_balls(1000, rng), check_annulus(100, rng)
    return [Check("genus never increases (fuzz)", bad == 0, f"runs={n_fuzz}"),
            Check("disjoint_balls postconditions", fb == 0, f"failures={fb}/1000"),
            Check("annulus radius postcondition", fa == 0, f"failures={fa}/100")]


def suite_links(n_samples: int = 16, seed: int = 3) -> list:
    out = []
    A, B = hopf_pair()
    out.append(Check("standard Hopf link", abs(linking_number(A, B)) == 1))
    e = np.eye(4)
    U = linking_number(small_circle(e[3], 0.1, e[0], e[1]), small_circle(-e[3], 0.1, e[0], e[1]))
    out.append(Check("unlink", U == 0))
    rng = np.random.default_rng(seed)
    params = [(CENTRAL, DiskParam(1.0, TWO_PI * k / 8)) for k in range(8)]
    while len(params) < n_samples:
        params.append(random_omega_member(rng))
    bad = []
    for a, z in params:
        H = hopf_loops(a, z)
        lk = linking_number(H.beta_plus, H.beta_minus)
        lo, hi = sign_separation(a, z, H)
        if abs(lk) != 1 or not (lo > 0 > hi):
            bad.append((a, z, lk, lo, hi))
    out.append(Check("beta+/beta- Hopf and sign-separated", not bad, f"{len(params) - len(bad)}/{len(params)}"))
    out.append(Check("central loop monodromy is the 2-shift", zero_monodromy(central_loop(1)) == (2, 3, 0, 1)))
    return out


def run(suite: str = "all", seed: int | None = None) -> dict:
    names = SUITES if suite == "all" else (suite,)
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {suite!r}")
    fns = {"family": suite_family, "trig": suite_trig, "loops": suite_loops, "surgery": suite_surgery,
           "links": suite_links}
    report = {"suites": {}, "passed": True}
    for n in names:
        t = time.perf_counter()
        checks = fns[n]() if seed is None or n == "loops" else fns[n](seed=seed)
        passed = all(c.passed for c in checks)
        report["suites"][n] = {"passed": passed, "seconds": round(time.perf_counter() - t, 3),
                               "checks": [asdict(c) for c in checks]}
        report["passed"] &= passed
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, default=lambda o: bool(o) if isinstance(o, np.bool_) else str(o))
