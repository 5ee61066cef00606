import math

import pytest

from sweepout_lab.family import CENTRAL, GREAT_SPHERE, DiskParam, ProjParam
from sweepout_lab.mesh import GridSpec
from sweepout_lab.sweep import (COLUMNS, CSV_VERSION, AGrid, SweepSpec, ZGrid, documented_width_spec,
                                evaluate_member, profile, profile_rows, read_csv, width_anchor)

SMALL = SweepSpec(AGrid(0), ZGrid((0.0, 1.0), 2), GridSpec(24))


def test_grids():
    assert AGrid(0).points() == [GREAT_SPHERE, CENTRAL]
    assert len(AGrid(1).points()) == 2 + 6 - 2  # coordinate points include both seeds
    assert len(AGrid(2).points()) == (3 ** 6 - 1) // 2
    assert len(ZGrid((0.0, 0.5), 4).points()) == 5
    with pytest.raises(ValueError):
        SweepSpec(outputs=frozenset({"volume"}))


def test_csv_layout_and_round_trip():
    text = profile(SMALL, jobs=1)
    lines = text.split("\n")
    assert lines[0] == f"# {CSV_VERSION}" and lines[1] == ",".join(COLUMNS)
    assert "\r" not in text and text.endswith("\n")
    rows = read_csv(text)
    assert len(rows) == 6
    assert [r.genus_value for r in rows[3:]] == [2, 1, 1]
    assert rows[0].area == pytest.approx(4 * math.pi, rel=0.02)
    with pytest.raises(ValueError):
        read_csv("a0,a1\n")


def test_parallel_rows_match_serial():
    assert profile(SMALL, jobs=2) == profile(SMALL, jobs=1)


def test_empty_member_is_recorded():
    row = evaluate_member(ProjParam(1, 0, 0, 0, 0, 0), DiskParam(0.0), GridSpec(16))
    assert row.area == 0.0 and row.genus == 0 and row.error == ""


def test_zero_counts_in_rows():
    rows = profile_rows(SweepSpec(AGrid(0), ZGrid((1.0,), 3), GridSpec(16), frozenset({"zeros"})))
    assert [r.zero_count for r in rows if r.a == CENTRAL.a] == [4, 4, 4]


def test_width_anchor_low_resolution():
    spec = SweepSpec(AGrid(0, (ProjParam(0, 0, 0, 0, 1, 0),)), ZGrid((0.0,), 1), GridSpec(24), frozenset({"area"}))
    w = width_anchor(spec, jobs=1)
    # a sweepout's maximal area bounds the width from above; the near-double-sphere member is largest
    assert w.bound_ok and w.max_area >= 2 * math.pi ** 2 * 0.98
    assert w.argmax.a == CENTRAL.a and w.max_area < 8 * math.pi
    with pytest.raises(ValueError):
        width_anchor(SMALL)
    assert documented_width_spec(32).resolution.resolution == 32


def test_width_slice_max_near_two_great_spheres():
    # derived: near the singular locus the members approach two great spheres (8 pi)
    w = width_anchor(documented_width_spec(96))
    assert abs(w.max_area - 8 * math.pi) / (8 * math.pi) < 0.02
