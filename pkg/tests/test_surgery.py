import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sweepout_lab.errors import (AreaTooLarge, GenusIncreased, NoAnnulus, NoSuchComponent, NotSimple,
                                 RadiusTooLarge)
from sweepout_lab.homology import h1_basis, simple_cycles
from sweepout_lab.mesh import boundary_loops, euler_characteristic, excise, genus, n_components
from sweepout_lab.s3geom import geodesic_distance
from sweepout_lab.shapes import disjoint_union, icosphere, to_s3_patch, torus_chain, torus_r3
from sweepout_lab.surgery import (Ball, Isotopy, NeckPinch, PinchOffLog, Shrink, SurgeryEvent, annulus_ok,
                                  annulus_radius_search, apply_process, check_disjoint_balls, components,
                                  disjoint_balls, neck_pinch, neck_pinch_detailed, random_event, reglue,
                                  shrink_component, small_balls_detailed, vertex_cycle, vertex_link)

TORUS = torus_r3(1.0, 0.35, 16, 8)


def meridian(S):
    return simple_cycles(S, h1_basis(S).cycles[0])[0]


def test_pinch_along_generator_lowers_genus():
    P = neck_pinch_detailed(TORUS, meridian(TORUS))
    assert P.surface.is_closed and genus(P.surface) == 0
    assert euler_characteristic(P.surface) == euler_characteristic(TORUS) + 2


def test_reglue_restores_euler_characteristic():
    P = neck_pinch_detailed(TORUS, meridian(TORUS))
    R = reglue(P)
    assert euler_characteristic(R) == euler_characteristic(TORUS) and genus(R) == 1
    assert R.n_faces == TORUS.n_faces


def test_pinch_along_vertex_link_splits_off_sphere():
    S = neck_pinch(TORUS, vertex_link(TORUS, 5))
    assert n_components(S) == 2 and genus(S) == 1


def test_pinch_rejects_bad_cycles():
    with pytest.raises(NotSimple):
        vertex_cycle(TORUS, [0, 1, 0])
    with pytest.raises(NotSimple):
        vertex_cycle(TORUS, [0, 50, 100])
    B = h1_basis(TORUS)
    with pytest.raises(NotSimple):
        vertex_cycle(TORUS, B.cycles[0] + B.cycles[1])
    S = icosphere(2)
    open_S = excise(S, [S.vertices[0]], 0.2)
    with pytest.raises(NoAnnulus):
        neck_pinch(open_S, boundary_loops(open_S)[0])


def test_shrink_and_components():
    S = disjoint_union(TORUS, icosphere(1))
    comps = components(S)
    assert len(comps) == 2 and comps[0][0] == 0
    assert genus(shrink_component(S, 0)) == 0 and genus(shrink_component(S, 1)) == 1
    with pytest.raises(NoSuchComponent):
        shrink_component(S, 2)


def test_event_log_round_trip():
    S = disjoint_union(TORUS, icosphere(1))
    out, log = apply_process(S, [Isotopy(lambda V: V * 1.01), NeckPinch(meridian(S)), Shrink(1)])
    assert log.genus_trace == (1, 1, 0, 0)
    text = log.to_text()
    assert text.splitlines()[1].startswith("EVENT neck_pinch 1 0")
    assert PinchOffLog.parse(text) == log.events
    with pytest.raises(ValueError):
        PinchOffLog.parse("PINCH 1 0\n")


def test_genus_increase_is_rejected():
    with pytest.raises(GenusIncreased):
        SurgeryEvent("isotopy", 0, 1)
    with pytest.raises(GenusIncreased):
        PinchOffLog.parse("EVENT shrink 1 2\n")


@given(st.integers(0, 2 ** 32 - 1))
def test_random_processes_never_increase_genus(seed):
    rng = np.random.default_rng(seed)
    S = disjoint_union(torus_r3(1, 0.35, 12, 6), icosphere(1))
    for _ in range(4):
        S, log = apply_process(S, [random_event(S, rng)])
        assert all(e.genus_after <= e.genus_before for e in log.events)


def _cluster(rng, q, n, zeta):
    c0 = rng.normal(size=4)
    P = c0 / np.linalg.norm(c0) + rng.normal(size=(q, 4)) * zeta * n * rng.uniform(0.5, 20)
    return list(P / np.linalg.norm(P, axis=1, keepdims=True))


@given(st.integers(1, 5), st.integers(1, 3), st.floats(0.01, 0.99), st.integers(0, 2 ** 32 - 1))
def test_disjoint_balls_postconditions(q, n, frac, seed):
    zeta = math.pi / (2 * n * (3 * n) ** q) * frac
    P = _cluster(np.random.default_rng(seed), q, n, zeta)
    balls = disjoint_balls(P, zeta, n, q)
    assert check_disjoint_balls(P, zeta, n, balls) == []
    # the radius is zeta times a power of 3n
    k = math.log(balls[0].radius / zeta, 3 * n)
    assert abs(k - round(k)) < 1e-9 and 0 <= round(k) <= q - len(balls)


def test_disjoint_balls_merges_close_pair():
    p = np.array([0, 0, 0, 1.0])
    q = np.array([0, 0, 1e-4, 1.0])
    q /= np.linalg.norm(q)
    balls = disjoint_balls([p, q], 1e-3, 1, 2)
    assert len(balls) == 1 and balls[0].radius == pytest.approx(3e-3)
    far = disjoint_balls([p, -p], 1e-3, 1, 2)
    assert len(far) == 2
    with pytest.raises(RadiusTooLarge):
        disjoint_balls([p], 1.0, 2, 1)
    with pytest.raises(RadiusTooLarge):
        Ball(p, 1.0)


@given(st.integers(2, 5), st.integers(1, 2), st.integers(0, 2 ** 32 - 1))
def test_annulus_radius_postcondition(q, N, seed):
    rng = np.random.default_rng(seed)
    P = np.array([0, 0, 0, 1.0]) + rng.normal(size=(q, 4)) * 10.0 ** rng.uniform(-12, -1, size=(q, 1))
    P = list(P / np.linalg.norm(P, axis=1, keepdims=True))
    R = annulus_radius_search(P, q, N, 0.5)
    assert annulus_ok(P, N, R)
    assert 5.0 ** (-2 * N * q * q) * 0.5 < R < 5.0 ** (-2 * N) * 0.5


def test_annulus_search_needs_two_points_of_room():
    with pytest.raises(ValueError):
        annulus_radius_search([np.array([0, 0, 0, 1.0])], 1, 1, 0.5)


def test_small_balls_kill_genus():
    S = to_s3_patch(torus_r3(0.06, 0.02, 40, 14))
    res = small_balls_detailed(S, 1, 1, 1.0)
    assert len(res.balls) == 1 and res.remainder_genus == 0
    assert 1.0 / (2 * 3) < res.radius < 1.0
    # the ball swallows a short loop of the torus
    c = res.balls[0].center
    assert min(geodesic_distance(c, v) for v in S.vertices) < 1e-9
    with pytest.raises(AreaTooLarge):
        small_balls_detailed(to_s3_patch(torus_r3(0.5, 0.2, 24, 8)), 1, 1, 1.0)


def test_small_balls_genus_two():
    S = to_s3_patch(torus_chain(2, n=32, scale=0.03))
    res = small_balls_detailed(S, 2, 1, 1.0)
    assert res.remainder_genus == 0 and 1 <= len(res.balls) <= 2


def test_separating_waist_pinch_gives_two_tori():
    from sweepout_lab.homology import boundary_of_faces
    from sweepout_lab.mesh import component_genera
    G = torus_chain(2, n=28)
    # the two tori overlap around x = 0.9; faces left of it bound the waist
    left = np.nonzero(G.vertices[G.triangles].mean(axis=1)[:, 0] < 0.9)[0]
    (waist,) = simple_cycles(G, boundary_of_faces(G, left))
    P = neck_pinch(G, waist)
    assert n_components(P) == 2 and sorted(component_genera(P)) == [1, 1]


def test_contractible_pinch_on_sphere_gives_two_spheres():
    S = icosphere(3)
    P = neck_pinch(S, vertex_link(S, 0))
    assert n_components(P) == 2 and genus(P) == 0
