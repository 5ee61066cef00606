"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import time

import numpy as np

from oracles import BoundarySpace, brute_force_systole, saddle_oracle
from sweepout_lab import verify
from sweepout_lab.errors import SweepoutError
from sweepout_lab.family import (CENTRAL, GREAT_SPHERE, HYPERBOLA, SADDLE, DiskParam, ProjParam, critical_count,
                                 f_profile)
from sweepout_lab.homology import class_mask, h1_basis, independent_short_loops, simple_cycles, systole, z2_rank
from sweepout_lab.links import central_loop, zero_monodromy
from sweepout_lab.mesh import GridSpec, area, extract, extract_phi5, flat_torus, genus, slit_torus, vertex_distances
from sweepout_lab.shapes import disjoint_union, icosphere, torus_chain, torus_r3
from sweepout_lab.surgery import NeckPinch, Shrink, apply_process
from sweepout_lab.sweep import documented_width_spec, genus_table_samples, member_genus, width_anchor
from sweepout_lab.trigpoly import circle_distance


def report(n, name, passed, detail):
    print(f"\n[{'PASS' if passed else 'FAIL'}] criterion {n:2d} {name}: {detail}")
    assert passed, detail


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.s = time.perf_counter() - self.t0


def test_01_great_sphere_area():
    with Timer() as t:
        A = area(extract(GREAT_SPHERE, DiskParam(0.0), GridSpec(96)))
    rel = abs(A - 4 * math.pi) / (4 * math.pi)
    report(1, "great-sphere area", rel < 0.01 and t.s < 10, f"area={A:.6f} rel_err={rel:.2e} time={t.s:.1f}s")


def test_02_double_sphere_area():
    with Timer() as t:
        A = [area(extract_phi5(CENTRAL, GridSpec(r), detect_singular=False)) for r in (48, 72, 108)]
    # oracle: Richardson extrapolation with the observed order on a ratio-1.5 ladder
    p = math.log(abs(A[0] - A[1]) / abs(A[1] - A[2])) / math.log(1.5)
    A_inf = A[2] + (A[2] - A[1]) / (1.5 ** p - 1)
    rel = abs(A[2] - 8 * math.pi) / (8 * math.pi)
    ok = rel < 0.02 and abs(A[2] - A_inf) / A_inf < 0.02 and abs(A_inf - 8 * math.pi) / (8 * math.pi) < 0.02
    report(2, "double-sphere area", ok and t.s < 20,
           f"area={A[2]:.5f} extrapolated={A_inf:.5f} (order {p:.2f}) 8pi={8 * math.pi:.5f} rel_err={rel:.2e} "
           f"time={t.s:.1f}s")


def test_03_width_anchor():
    with Timer() as t:
        w = width_anchor(documented_width_spec(64))
    report(3, "width anchor", w.bound_ok and t.s < 600,
           f"max_area={w.max_area:.5f} at {w.argmax.a} bound={w.bound:.5f} time={t.s:.1f}s")


def test_04_genus_table():
    grid = GridSpec(128)
    bad = []
    samples = genus_table_samples()
    with Timer() as t:
        for s in samples:
            g = member_genus(s.a, s.z, grid)
            if not s.accepts(g):
                bad.append(f"{s.label}: genus {g}, want {s.expected}")
    report(4, "genus table", not bad, f"{len(samples) - len(bad)}/{len(samples)} match {bad[:3]} time={t.s:.0f}s")


def test_05_zero_counts():
    bad = []
    for k in range(8):
        p = f_profile(CENTRAL, DiskParam(1.0, 2 * math.pi * k / 8))
        if p.total_order != 4 or p.orders != [1, 1, 1, 1]:
            bad.append(f"central theta #{k}: {p.zeros}")
    t0 = f_profile(CENTRAL, DiskParam(0.0)).total_order
    rng = np.random.default_rng(5)
    worst, worst_r1, skipped = 0, 0, 0
    for k in range(10_000):
        a, z = verify.random_valid_member(rng, 1.0 if k % 4 == 0 else None)
        try:
            o = f_profile(a, z).total_order
        except SweepoutError:
            skipped += 1
            continue
        worst = max(worst, o)
        if z.r == 1.0:
            worst_r1 = max(worst_r1, o)
    ok = not bad and t0 == 6 and worst <= 6 and worst_r1 <= 4
    report(5, "zero counts", ok, f"central |z|=1 ok={not bad} z=0 order={t0} max={worst} max(r=1)={worst_r1} "
                                 f"skipped={skipped}/10000")


def test_06_zero_sum_tracking():
    rng = np.random.default_rng(6)
    members = [(CENTRAL, DiskParam(1.0, 2 * math.pi * k / 32)) for k in range(32)]
    members += [verify.random_omega_member(rng) for _ in range(96)]
    worst, full = 0.0, 0
    for a, z in members:
        p = f_profile(a, z)
        if p.total_order == 4:
            full += 1
            zs = sum(o * t for t, o in p.zeros) % (2 * math.pi)
            worst = max(worst, circle_distance(zs, -2 * z.theta))
    perm = zero_monodromy(central_loop(1))
    report(6, "zero-sum tracking", worst <= 1e-3 and full > 0 and perm == (2, 3, 0, 1),
           f"max dist={worst:.2e} over {full} order-4 members, monodromy={perm}")


def test_07_trig_suite():
    with Timer() as t:
        checks = verify.suite_trig(1000, seed=7)
    report(7, "trig-poly suite", all(c.passed for c in checks) and t.s < 5,
           "; ".join(f"{c.name} [{c.detail}]" for c in checks) + f" time={t.s:.2f}s")


def test_08_critical_points():
    rng = np.random.default_rng(8)
    with Timer() as t:
        mx = max(max(critical_count(SADDLE, b), critical_count(HYPERBOLA, b))
                 for b in rng.normal(size=(1000, 3)) * 2)
        at0 = critical_count(SADDLE, [0, 0, 0])
    # derived value, frozen: multistart Newton on the gradient gives one critical point
    oracle = saddle_oracle([0, 0, 0])
    report(8, "critical points", mx <= 9 and at0 == oracle == 1 and t.s < 30,
           f"max count={mx} saddle(b=0)={at0} oracle={oracle} time={t.s:.1f}s")


def test_09_systole():
    with Timer() as t:
        T = flat_torus(2.0, 0.5, 64, 16)
        c, L = systole(T)
        S = slit_torus(4.0)
        _, L4 = systole(S)
    ref = brute_force_systole(T)
    h = float(S.edge_lengths.max())
    ok = abs(L - 0.5) <= 0.025 and abs(L - ref) <= 1e-9 and L4 >= 4 - h and t.s < 60
    report(9, "systole", ok, f"flat={L:.5f} brute_force={ref:.5f} slit(L=4)={L4:.4f} >= {4 - h:.4f} time={t.s:.1f}s")


def _forbidden_disks(S, k, radius, rng):
    """Faces within ``radius`` of ``k`` random vertices."""
    out = []
    for v in rng.choice(S.n_vertices, size=k, replace=False):
        near = vertex_distances(S, S.vertices[v]) < radius
        out.append(np.flatnonzero(np.all(near[S.triangles], axis=1)))
    return out


def test_10_short_loops():
    S = torus_chain(3, n=32)
    res = independent_short_loops(S, 3)
    B = h1_basis(S)
    space = BoundarySpace(S)
    rank = z2_rank([class_mask(S, B, c) for c in res.loops])
    ok3 = len(res.loops) == 3 and rank == 3 and res.residual_genus == 0 and \
        not any(space.is_boundary(c.edges) for c in res.loops)

    P = extract(CENTRAL, DiskParam(0.0), GridSpec(64), detect_singular=False)
    forb = _forbidden_disks(P, 4, 4 * P.mean_edge_length(), np.random.default_rng(10))
    res2 = independent_short_loops(P, 2, forb)
    bad_edges = set(P.face_edges[np.concatenate(forb)].reshape(-1).tolist())
    B2 = h1_basis(P)
    rank2 = z2_rank([class_mask(P, B2, c) for c in res2.loops])
    avoid = all(not bad_edges & set(c.edges) for c in res2.loops)
    ok2 = genus(P) == 2 and len(res2.loops) == 2 and rank2 == 2 and avoid and res2.residual_genus == 0
    report(10, "short loops", ok3 and ok2,
           f"thin genus-3: loops={len(res.loops)} rank={rank} residual={res.residual_genus}; "
           f"genus-2 member: loops={len(res2.loops)} rank={rank2} avoid_forbidden={avoid}")


def test_11_pinch_off():
    with Timer() as t:
        bad = verify.fuzz_genus(1000, np.random.default_rng(11))
    # torus and sphere: pinch the torus along a meridian, then shrink the sphere it split into
    S = disjoint_union(torus_r3(1.0, 0.35, 16, 8), icosphere(1))
    cyc = simple_cycles(S, h1_basis(S).cycles[0])[0]
    _, log = apply_process(S, [NeckPinch(cyc), Shrink(1)])
    trace = log.genus_trace
    report(11, "pinch-off monotonicity", bad == 0 and trace == (1, 0, 0) and t.s < 30,
           f"genus increases={bad}/1000 two-component trace={trace} time={t.s:.1f}s")


def test_12_ball_combinatorics():
    rng = np.random.default_rng(12)
    fb = verify.check_balls(1000, rng)
    fa = verify.check_annulus(100, rng)
    report(12, "ball combinatorics", fb == 0 and fa == 0, f"disjoint_balls failures={fb}/1000 annulus={fa}/100")


def test_13_hopf_links():
    with Timer() as t:
        checks = verify.suite_links(16, seed=13)
    got = {c.name: c for c in checks}
    ok = all(c.passed for c in checks) and t.s < 30
    report(13, "Hopf links", ok, f"{got['beta+/beta- Hopf and sign-separated'].detail} samples linked; "
                                 f"standard={got['standard Hopf link'].passed} unlink={got['unlink'].passed} "
                                 f"time={t.s:.1f}s")


def test_14_bypass():
    nbad, which = verify.check_bypass(100, seed=14)
    report(14, "bypass", nbad == 0, f"failures={nbad}/100 {which[:5]}")
