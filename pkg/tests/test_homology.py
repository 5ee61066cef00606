import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import BoundarySpace, brute_force_systole
from sweepout_lab.errors import DiskNotSimplyConnected, NoNontrivialCycle, NotACycle
from sweepout_lab.homology import (Z2Chain, boundary_of_faces, bypass, class_mask, class_vector, disk_interior_edges, h1_basis,
                                   independent_short_loops, intersection_number, is_trivial, simple_cycles, systole,
                                   z2_rank)
from sweepout_lab.mesh import area, flat_torus
from sweepout_lab.shapes import icosphere, torus_chain, torus_r3

TORUS = torus_r3(1.0, 0.35, 20, 8)
CHAIN2 = torus_chain(2, n=28)


@pytest.mark.parametrize("S, g", [(icosphere(2), 0), (TORUS, 1), (CHAIN2, 2)])
def test_basis_rank_and_pairing(S, g):
    B = h1_basis(S)
    assert len(B.cycles) == 2 * g
    assert z2_rank([class_mask(S, B, c) for c in B.cycles]) == 2 * g
    space = BoundarySpace(S)
    for c in B.cycles:
        assert not space.is_boundary(c.edges) and not is_trivial(S, B, c)
    if g:
        # the intersection form is nondegenerate and symplectic
        M = np.array([[intersection_number(S, B, a, b) for b in B.cycles] for a in B.cycles])
        assert np.all(np.diag(M) == 0) and round(abs(np.linalg.det(M))) % 2 == 1


@given(st.sets(st.integers(0, TORUS.n_faces - 1), min_size=1, max_size=40))
def test_boundaries_are_trivial(faces):
    B = h1_basis(TORUS)
    assert is_trivial(TORUS, B, boundary_of_faces(TORUS, faces))


@given(st.sets(st.integers(0, TORUS.n_faces - 1), max_size=40))
def test_class_is_invariant_under_boundaries(faces):
    B = h1_basis(TORUS)
    c = B.cycles[0]
    assert np.array_equal(class_vector(TORUS, B, c + boundary_of_faces(TORUS, faces)), class_vector(TORUS, B, c))


def test_non_cycle_rejected():
    with pytest.raises(NotACycle):
        class_vector(TORUS, h1_basis(TORUS), Z2Chain({0}))


@pytest.mark.parametrize("S", [flat_torus(2.0, 0.5, 16, 4), flat_torus(1.0, 1.0, 8, 8), torus_r3(1, 0.4, 12, 6)])
def test_systole_matches_brute_force(S):
    c, L = systole(S)
    assert L == pytest.approx(brute_force_systole(S), rel=1e-12)
    assert c.is_cycle(S) and not BoundarySpace(S).is_boundary(c.edges)
    assert c.length(S) == pytest.approx(L)


def test_systole_on_sphere_raises():
    with pytest.raises(NoNontrivialCycle):
        systole(icosphere(1))


def test_systole_respects_forbidden_faces():
    S = flat_torus(2.0, 0.5, 32, 8)
    c0, L0 = systole(S)
    # forbid a band of faces that every short meridian crosses
    cand = np.flatnonzero(np.any(S.triangles < 8 * 4, axis=1))
    c1, L1 = systole(S, cand)
    assert L1 >= L0 - 1e-12
    bad = set(S.face_edges[cand].reshape(-1).tolist())
    assert not bad & set(c1.edges)


def _star(S, v):
    return np.flatnonzero(np.any(S.triangles == v, axis=1))


@given(st.integers(0, TORUS.n_vertices - 1))
def test_bypass_keeps_class_and_avoids_disk(v):
    B = h1_basis(TORUS)
    c, _ = systole(TORUS)
    disk = _star(TORUS, v)
    out = bypass(TORUS, c, [disk], B)
    assert is_trivial(TORUS, B, out + c)
    assert not set(disk_interior_edges(TORUS, disk).tolist()) & set(out.edges)
    bnd = boundary_of_faces(TORUS, disk).length(TORUS)
    assert out.length(TORUS) < c.length(TORUS) + bnd + TORUS.edge_lengths.max()


def test_bypass_rejects_non_disks():
    c = h1_basis(TORUS).cycles[0]
    with pytest.raises(DiskNotSimplyConnected):
        bypass(TORUS, c, [np.arange(TORUS.n_faces)])
    with pytest.raises(DiskNotSimplyConnected):
        bypass(TORUS, c, [np.concatenate([_star(TORUS, 0), _star(TORUS, 90)])])


def test_simple_cycles_split_figure_eight():
    B = h1_basis(CHAIN2)
    c = B.cycles[0] + B.cycles[1]
    pieces = simple_cycles(CHAIN2, c)
    assert sum(len(p) for p in pieces) == len(c.edges)
    assert all(len(set(p)) == len(p) for p in pieces)


def test_short_loops_genus_two():
    res = independent_short_loops(CHAIN2, 2)
    assert len(res.loops) == 2 and res.residual_genus == 0
    B = h1_basis(CHAIN2)
    assert z2_rank([class_mask(CHAIN2, B, c) for c in res.loops]) == 2
    assert all(c.is_cycle(CHAIN2) for c in res.loops)


def test_loewner_bound_on_square_torus():
    T = flat_torus(1.0, 1.0, 24, 24)
    L = systole(T)[1]
    assert L * L <= 2 / np.sqrt(3) * area(T)


@given(st.floats(0.5, 4.0))
def test_systole_scales_linearly(s):
    L1 = systole(flat_torus(1.0, 1.0, 12, 12))[1]
    assert systole(flat_torus(s, s, 12, 12))[1] == pytest.approx(s * L1, rel=1e-9)
