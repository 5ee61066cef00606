import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sweepout_lab.errors import HasBoundary, NonOrientable, PoleOnSurface
from sweepout_lab.family import CENTRAL, GREAT_SPHERE, DiskParam, ProjParam
from sweepout_lab.mesh import (GridSpec, area, boundary_loops, cap_boundaries, euler_characteristic, excise,
                               export_obj, extract, extract_phi5, flat_torus, genus, n_components, orientable,
                               punctate_genus, read_obj, slit_torus)
from sweepout_lab.shapes import (cone_torus, disjoint_union, dumbbell, great_sphere_s3, icosphere, mobius_band,
                                 torus_chain, torus_r3)


@pytest.mark.parametrize("S, g", [(icosphere(2), 0), (torus_r3(1, 0.35, 24, 8), 1), (dumbbell(24), 0),
                                  (torus_chain(2, n=28), 2)])
def test_genus_of_synthetic_shapes(S, g):
    assert S.is_closed and orientable(S)
    assert genus(S) == g
    assert euler_characteristic(S) == 2 - 2 * g


def test_genus_adds_over_components():
    S = disjoint_union(torus_r3(1, 0.35, 16, 6), icosphere(1), torus_r3(1, 0.3, 16, 6))
    assert n_components(S) == 3 and genus(S) == 2


def test_genus_errors():
    with pytest.raises(NonOrientable):
        genus(cap_boundaries(mobius_band())[0])
    S = icosphere(2)
    with pytest.raises(HasBoundary):
        genus(excise(S, [S.vertices[0]], 0.3))


@given(st.integers(1, 3))
def test_excise_and_cap_restores_genus(k):
    S = torus_r3(1, 0.35, 32, 12)
    cut = excise(S, list(S.vertices[:: 97][:k]), 0.2)
    assert len(boundary_loops(cut)) == k
    capped, caps = cap_boundaries(cut)
    assert len(caps) == k and genus(capped) == 1


def test_great_sphere_area_low_res():
    S = extract(GREAT_SPHERE, DiskParam(0.0), GridSpec(48))
    assert area(S) == pytest.approx(4 * math.pi, rel=0.01)
    assert genus(S) == 0 and not S.punctate_marks


def test_extraction_is_deterministic():
    a, z = ProjParam(0.1, 0.4, -0.2, 0.3, 0.5, 0.0), DiskParam(0.3, 1.0)
    A, B = extract(a, z, GridSpec(32)), extract(a, z, GridSpec(32))
    assert np.array_equal(A.vertices, B.vertices) and np.array_equal(A.triangles, B.triangles)


def test_vertices_lie_on_level_set():
    from sweepout_lab.family import phi5_ambient
    a = ProjParam(0.2, 0.5, -0.3, 0.1, 0.4, 0.6)
    S = extract_phi5(a, GridSpec(32))
    assert np.allclose(np.linalg.norm(S.vertices, axis=1), 1.0)
    assert np.max(np.abs(phi5_ambient(a, S.vertices))) < 1e-3


def test_cone_point_punctate_genus():
    S, apex = cone_torus()
    assert S.punctate_marks == {apex}
    assert punctate_genus(S) == 1


def test_area_refinement_is_stable():
    a = ProjParam(0.1, 0.6, 0.2, -0.3, 0.1, 0.0)
    A1 = area(extract_phi5(a, GridSpec(32)))
    A2 = area(extract_phi5(a, GridSpec(64)))
    assert abs(A1 - A2) / A2 < 0.005


def test_obj_round_trip(tmp_path):
    S = great_sphere_s3(2)
    with pytest.raises(PoleOnSurface):
        export_obj(S, S.vertices[0])
    obj, r4 = export_obj(S, [1.0, 0, 0, 0])
    back = read_obj(obj, r4)
    assert np.allclose(back.vertices, S.vertices, atol=0) and np.array_equal(back.triangles, S.triangles)
    flat = read_obj(obj)
    assert flat.vertices.shape[1] == 3 and genus(flat) == 0


def test_flat_torus_is_isometric():
    m, n = 32, 8
    T = flat_torus(2.0, 0.5, m, n)
    assert genus(T) == 1
    # each grid cell is a planar rectangle with chord sides
    chord = lambda L, k: 2 * L / (2 * math.pi) * math.sin(math.pi / k)
    assert area(T) == pytest.approx(m * n * chord(2.0, m) * chord(0.5, n), rel=1e-12)


def test_slit_torus_topology():
    S = slit_torus(4.0)
    assert not S.is_closed and len(boundary_loops(S)) == 1
    assert genus(cap_boundaries(S)[0]) == 1
    with pytest.raises(ValueError):
        slit_torus(1.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(8)
    with pytest.raises(ValueError):
        GridSpec(64, magnification=0.5)


def test_central_member_low_res_genus():
    S = extract(CENTRAL, DiskParam(1.0, 0.0), GridSpec(64))
    assert genus(S) == 1


def test_double_cone_member_has_punctate_genus_zero():
    # the quadric touches S^3 at (0, 0, -1, 0) with an indefinite contact form
    S = extract_phi5(ProjParam(0.5, 0.0, 0.0, 0.5, 0.0, 1.0), GridSpec(48))
    assert len(S.punctate_marks) == 1
    apex = S.vertices[next(iter(S.punctate_marks))]
    assert np.linalg.norm(apex - [0, 0, -1, 0]) < 0.02
    assert punctate_genus(S) == 0


def test_icosphere_area():
    assert area(icosphere(6)) == pytest.approx(4 * math.pi, rel=0.01)


def test_slit_torus_area_and_unslit_systole():
    from sweepout_lab.homology import systole
    assert area(slit_torus(2.0)) == pytest.approx(1.0, rel=0.02)
    S = slit_torus(2.0, fraction=0.0)
    assert S.is_closed
    assert systole(S)[1] == pytest.approx(0.5, rel=0.01)


def test_genus_two_obj_reimport():
    from sweepout_lab.shapes import to_s3_patch
    S = to_s3_patch(torus_chain(2, n=28))
    obj, _ = export_obj(S, [0, 0, 0, -1.0])
    back = read_obj(obj)
    assert euler_characteristic(back) == -2 and genus(back) == 2
