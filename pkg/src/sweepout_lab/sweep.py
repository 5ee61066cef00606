"""Parameter sweeps over the desingularized family: area/genus profiles and the width anchor."""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySurface, SweepoutError
from .family import CENTRAL, GREAT_SPHERE, CutoffConfig, DiskParam, ProjParam, f_profile
from .mesh import GridSpec, area, extract, genus, punctate_genus

CSV_VERSION = "sweepout-lab profile v1"
COLUMNS = ["a0", "a1", "a2", "a3", "a4", "a5", "r", "theta", "area", "genus", "zero_count", "sing_count", "error"]
OUTPUTS = frozenset({"area", "genus", "zeros", "sing_count"})
WIDTH_5 = 2 * math.pi ** 2


def near_singular_seeds() -> tuple:
    """Hand-picked points on and near the locus where the quadrics split into two spheres."""
    out = [ProjParam.singular(u, v) for u, v in [(0.0, 0.0), (0.3, 0.0), (0.0, 0.3), (0.2, -0.2), (0.4, 0.4)]]
    out.append(ProjParam(0.0, 0.0, 0.0, 0.05, 0.0, 1.0))
    return tuple(out)


@dataclass(frozen=True)
class AGrid:
    """Points of RP^5: an axis grid on S^5 plus explicit seeds.

    ``levels = 0`` gives seeds only, ``1`` adds the 6 coordinate points and
    ``2`` every vector with entries in ``{-1, 0, 1}`` (364 points after the
    sign normalization).  The central point and the great-sphere point are
    always among the seeds.
    """

    levels: int = 1
    seeds: tuple = ()

    def __post_init__(self):
        seeds = list(self.seeds)
        for s in (CENTRAL, GREAT_SPHERE):
            if s not in seeds:
                seeds.insert(0, s)
        object.__setattr__(self, "seeds", tuple(seeds))

    def points(self) -> list:
        pts = list(self.seeds)
        if self.levels >= 1:
            vals = (0, 1) if self.levels == 1 else (-1, 0, 1)
            for v in itertools.product(vals, repeat=6):
                if self.levels == 1 and sum(map(abs, v)) != 1:
                    continue
                if any(v):
                    pts.append(ProjParam(*v))
        out = []
        for p in pts:
            if p not in out:
                out.append(p)
        return out


@dataclass(frozen=True)
class ZGrid:
    """Polar grid on the closed disk; radius 0 contributes a single point."""

    radii: tuple = (0.0,)
    n_theta: int = 1

    def points(self) -> list:
        out = []
        for r in self.radii:
            if r == 0.0:
                out.append(DiskParam(0.0, 0.0))
            else:
                out.extend(DiskParam(float(r), 2 * math.pi * k / self.n_theta) for k in range(self.n_theta))
        return out


@dataclass(frozen=True)
class SweepSpec:
    a_grid: AGrid = field(default_factory=AGrid)
    z_grid: ZGrid = field(default_factory=ZGrid)
    resolution: GridSpec = field(default_factory=GridSpec)
    outputs: frozenset = OUTPUTS
    cfg: CutoffConfig = field(default_factory=CutoffConfig)

    def __post_init__(self):
        if not self.a_grid.points() or not self.z_grid.points():
            raise ValueError("grids must be nonempty")
        bad = set(self.outputs) - OUTPUTS
        if bad:
            raise ValueError(f"unknown outputs {sorted(bad)}")

    def members(self) -> list:
        return [(a, z) for a in self.a_grid.points() for z in self.z_grid.points()]


@dataclass
class ProfileRow:
    a: tuple
    r: float
    theta: float
    area: float = float("nan")
    genus: object = ""          # int, or "punctate:g" for surfaces with singular points
    zero_count: int = 0
    sing_count: int = 0
    error: str = ""

    def cells(self) -> list:
        f = lambda x: format(float(x), ".17g")
        return [*map(f, self.a), f(self.r), f(self.theta), f(self.area), str(self.genus),
                str(self.zero_count), str(self.sing_count), self.error]

    @property
    def genus_value(self) -> int | None:
        g = self.genus
        if isinstance(g, str):
            if g.startswith("punctate:"):
                return int(g.split(":")[1])
            return int(g) if g else None
        return int(g)


def evaluate_member(a: ProjParam, z: DiskParam, grid: GridSpec, cfg: CutoffConfig = CutoffConfig(),
                    outputs: frozenset = OUTPUTS) -> ProfileRow:
    """One profile row; extraction errors are recorded in the row, never raised."""
    row = ProfileRow(a.a, z.r, z.theta)
    errors = []
    if "zeros" in outputs and a.affine() is not None:
        try:
            row.zero_count = f_profile(a, z, cfg).total_order
        except SweepoutError as exc:
            errors.append(f"zeros:{type(exc).__name__}")
    if outputs & {"area", "genus", "sing_count"}:
        try:
            S = extract(a, z, grid, cfg, detect_singular="sing_count" in outputs or "genus" in outputs)
        except EmptySurface:
            row.area, row.genus = 0.0, 0
        except SweepoutError as exc:
            errors.append(f"extract:{type(exc).__name__}")
        else:
            row.area = area(S)
            row.sing_count = len(S.punctate_marks)
            if "genus" in outputs:
                try:
                    row.genus = f"punctate:{punctate_genus(S)}" if S.punctate_marks else genus(S)
                except SweepoutError as exc:
                    errors.append(f"genus:{type(exc).__name__}")
    row.error = ";".join(errors)
    return row


def _eval_job(args):
    return evaluate_member(*args)


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("SWEEPOUT_JOBS", "1")))
    except ValueError:
        return 1


def profile_rows(spec: SweepSpec, jobs: int | None = None) -> list:
    """Rows in grid order (a outer, z inner), whatever order the workers finish in."""
    jobs = default_jobs() if jobs is None else jobs
    args = [(a, z, spec.resolution, spec.cfg, frozenset(spec.outputs)) for a, z in spec.members()]
    if jobs <= 1:
        return [_eval_job(x) for x in args]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_eval_job, args))


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


def read_csv(text: str) -> list:
    lines = text.splitlines()
    if not lines or lines[0] != f"# {CSV_VERSION}":
        raise ValueError("missing or unknown profile version header")
    rd = csv.DictReader(lines[1:])
    out = []
    for d in rd:
        g = d["genus"]
        out.append(ProfileRow(tuple(float(d[f"a{i}"]) for i in range(6)), float(d["r"]), float(d["theta"]),
                              float(d["area"]), int(g) if g.lstrip("-").isdigit() else g,
                              int(d["zero_count"]), int(d["sing_count"]), d["error"]))
    return out


def profile(spec: SweepSpec, jobs: int | None = None) -> str:
    """The sweep as CSV text (UTF-8, LF line endings, versioned header comment)."""
    return rows_to_csv(profile_rows(spec, jobs))


@dataclass
class WidthAnchor:
    max_area: float
    argmax: ProfileRow
    bound: float
    bound_ok: bool


def width_anchor(spec: SweepSpec, jobs: int | None = None, rel_tol: float = 0.02) -> WidthAnchor:
    """Largest mesh area over a fixed-``z`` slice, compared against ``2 pi^2`` (1 - rel_tol)."""
    if len(spec.z_grid.points()) != 1:
        raise ValueError("width_anchor needs a single z value")
    s = SweepSpec(spec.a_grid, spec.z_grid, spec.resolution, frozenset({"area"}), spec.cfg)
    rows = [r for r in profile_rows(s, jobs) if not math.isnan(r.area)]
    best = max(rows, key=lambda r: r.area)
    bound = WIDTH_5 * (1 - rel_tol)
    return WidthAnchor(best.area, best, bound, best.area >= bound)


def documented_width_spec(resolution: int = 64) -> SweepSpec:
    """The z = 0 slice used for the width check: coordinate points plus near-singular seeds."""
    return SweepSpec(AGrid(1, near_singular_seeds()), ZGrid((0.0,), 1), GridSpec(resolution),
                     frozenset({"area"}))


def member_genus(a: ProjParam, z: DiskParam, grid: GridSpec, cfg: CutoffConfig = CutoffConfig()) -> int:
    """Genus of one member (punctate genus when marked); an empty level set counts as genus 0."""
    try:
        S = extract(a, z, grid, cfg)
    except EmptySurface:
        return 0
    return punctate_genus(S) if S.punctate_marks else genus(S)


@dataclass(frozen=True)
class GenusSample:
    label: str
    a: ProjParam
    z: DiskParam
    expected: str       # "==k" or "<=k"

    def accepts(self, g: int) -> bool:
        k = int(self.expected[2:])
        return g == k if self.expected.startswith("==") else g <= k


def genus_table_samples(seed: int = 0) -> list:
    """The genus table: central point at z = 0 and on |z| = 1, an a5 = 0 slice and a |z| = 1 slice.

    Half of the |z| = 1 slice is drawn uniformly from RP^5 and half just off
    the singular locus (as in the Hopf-loop samples), where a handle survives.
    """
    rng = np.random.default_rng(seed)
    out = [GenusSample("central z=0", CENTRAL, DiskParam(0.0), "==2")]
    out += [GenusSample(f"central |z|=1 #{k}", CENTRAL, DiskParam(1.0, 2 * math.pi * k / 8), "==1") for k in range(8)]
    for k in range(32):
        v = rng.normal(size=6)
        v[5] = 0.0
        out.append(GenusSample(f"a5=0 #{k}", ProjParam(*v),
                               DiskParam(math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)), "==0"))
    for k in range(64):
        if k % 2:
            v = rng.normal(size=6)
        else:
            u, w = rng.normal(size=2) * 0.1
            v = np.array([u * w + rng.normal() * 1e-4, u, w, 0.0, 0.0, 1.0])
        out.append(GenusSample(f"|z|=1 #{k}", ProjParam(*v), DiskParam(1.0, rng.uniform(0, 2 * math.pi)), "<=1"))
    return out


__all__ = ["member_genus", "GenusSample", "genus_table_samples", "CSV_VERSION", "COLUMNS", "WIDTH_5", "AGrid", "ZGrid", "SweepSpec", "ProfileRow", "evaluate_member",
           "profile_rows", "profile", "rows_to_csv", "read_csv", "WidthAnchor", "width_anchor",
           "documented_width_spec", "near_singular_seeds", "default_jobs"]
