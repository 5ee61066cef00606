"""Command-line entry point ``sweepout-lab``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .errors import SweepoutError
from .family import CENTRAL, CutoffConfig, DiskParam, ProjParam
from .mesh import GridSpec, area, export_obj, extract, surface_genus, vertex_distances

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_GRID_KEYS = {f.name: f.type for f in dataclasses.fields(GridSpec)}
_SWEEP_KEYS = {"a_levels": int, "z_radii": str, "z_theta": int}
_CASTS = {"int": int, "float": float, int: int, float: float}


class UsageError(Exception):
    pass


def parse_config(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Keys mirror CutoffConfig/GridSpec fields."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k == "delta0":
            out[k] = float(v)
        elif k in _GRID_KEYS:
            cast = _CASTS.get(_GRID_KEYS[k], float)
            out[k] = cast(v)
        elif k in _SWEEP_KEYS:
            out[k] = _SWEEP_KEYS[k](v)
        else:
            raise UsageError(f"config line {n}: unknown key {k!r}")
    return out


def _floats(text: str, n: int, name: str) -> list:
    try:
        vals = [float(x) for x in text.replace(":", ",").split(",")]
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from exc
    if len(vals) != n:
        raise UsageError(f"--{name} needs {n} comma-separated numbers")
    return vals


def _settings(args) -> tuple:
    conf = {}
    if args.config:
        try:
            conf = parse_config(Path(args.config).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        except ValueError as exc:
            raise UsageError(f"bad config value: {exc}") from exc
    gkw = {k: v for k, v in conf.items() if k in _GRID_KEYS}
    if args.res is not None:
        gkw["resolution"] = args.res
    if args.seed is not None:
        gkw["rotation_seed"] = args.seed
    try:
        grid = GridSpec(**gkw)
        cfg = CutoffConfig(conf.get("delta0", CutoffConfig().delta0))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    a = ProjParam(*_floats(args.a, 6, "a")) if args.a else CENTRAL
    if args.z:
        r, th = _floats(args.z, 2, "z")
        try:
            z = DiskParam(r, th)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        z = DiskParam(0.0)
    return a, z, grid, cfg, conf


def _jobs(args) -> int:
    from .sweep import default_jobs

    return args.jobs if args.jobs is not None else default_jobs()


def _write(args, text: str | bytes) -> None:
    if args.out:
        Path(args.out).write_bytes(text if isinstance(text, bytes) else text.encode("utf-8"))
    else:
        sys.stdout.write(text if isinstance(text, str) else text.decode())


def _clear_pole(S) -> np.ndarray:
    for e in np.vstack([np.eye(4), -np.eye(4)]):
        if float(np.min(vertex_distances(S, e))) > S.mean_edge_length():
            return e
    rng = np.random.default_rng(0)
    while True:
        p = rng.normal(size=4)
        p /= np.linalg.norm(p)
        if float(np.min(vertex_distances(S, p))) > S.mean_edge_length():
            return p


def _loop_obj(S, loops) -> str:
    """Loops as OBJ ``l`` records over the surface's 4-vertex list."""
    from .surgery import vertex_cycle

    lines = [f"v {' '.join(format(c, '.17g') for c in w)}" for w in S.vertices]
    for c in loops:
        cyc = vertex_cycle(S, c)
        lines.append("l " + " ".join(str(v + 1) for v in cyc + cyc[:1]))
    return "\n".join(lines) + "\n"


def cmd_extract(args) -> int:
    a, z, grid, cfg, _ = _settings(args)
    S = extract(a, z, grid, cfg)
    g = surface_genus(S)
    print(f"vertices={S.n_vertices} faces={S.n_faces} area={area(S):.10g} genus={g} "
          f"singular={len(S.punctate_marks)}")
    if args.out:
        obj, r4 = export_obj(S, _clear_pole(S))
        Path(args.out).write_bytes(obj)
        Path(args.out).with_suffix(".r4").write_bytes(r4)
    return EXIT_OK


def cmd_profile(args) -> int:
    from .sweep import AGrid, SweepSpec, ZGrid, near_singular_seeds, profile

    _, _, grid, cfg, conf = _settings(args)
    radii = tuple(float(x) for x in conf.get("z_radii", "0").split(",")) if "z_radii" in conf else (0.0,)
    spec = SweepSpec(AGrid(conf.get("a_levels", 1), near_singular_seeds()),
                     ZGrid(radii, conf.get("z_theta", 8)), grid, cfg=cfg)
    _write(args, profile(spec, _jobs(args)))
    return EXIT_OK


def _closed_member(args):
    a, z, grid, cfg, _ = _settings(args)
    return extract(a, z, grid, cfg, detect_singular=False)


def cmd_systole(args) -> int:
    from .homology import systole

    S = _closed_member(args)
    c, L = systole(S)
    print(f"systole={L:.10g} edges={len(c)}")
    if args.out:
        from .homology import simple_cycles
        Path(args.out).write_text(_loop_obj(S, simple_cycles(S, c)))
    return EXIT_OK


def cmd_loops(args) -> int:
    from .homology import independent_short_loops
    from .mesh import genus

    S = _closed_member(args)
    g = genus(S)
    res = independent_short_loops(S, g)
    for L in res.lengths:
        print(f"loop length={L:.10g}")
    print(f"genus={g} residual_genus={res.residual_genus}")
    if args.out:
        from .homology import simple_cycles
        pieces = [p for c in res.loops for p in simple_cycles(S, c)]
        Path(args.out).write_text(_loop_obj(S, pieces))
    return EXIT_OK if res.residual_genus == 0 else EXIT_FAIL


def cmd_surgery(args) -> int:
    from .homology import independent_short_loops, simple_cycles
    from .surgery import NeckPinch, PinchOffLog, Shrink, apply_process, components, process_genus

    cur = _closed_member(args)
    events = []
    # pinch along one short nontrivial loop at a time, then shrink what is left
    while process_genus(cur) > 0:
        loop = independent_short_loops(cur, 1).loops[0]
        cur, log = apply_process(cur, [NeckPinch(simple_cycles(cur, loop)[0])])
        events += log.events
    while components(cur):
        cur, log = apply_process(cur, [Shrink(0)])
        events += log.events
    _write(args, PinchOffLog(events).to_text())
    return EXIT_OK


def cmd_links(args) -> int:
    from .links import hopf_loops, linking_number, sign_separation

    a, z, _, cfg, _ = _settings(args)
    if not args.z:
        z = DiskParam(1.0, 0.0)
    H = hopf_loops(a, z, cfg)
    lk = linking_number(H.beta_plus, H.beta_minus, seed=args.seed or 0)
    lo, hi = sign_separation(a, z, H, cfg)
    print(f"linking_number={lk} min_F_plus={lo:.6g} max_F_minus={hi:.6g}")
    if args.out:
        Path(args.out).write_text(H.beta_plus.to_obj() + H.beta_minus.to_obj())
    return EXIT_OK if abs(lk) == 1 and lo > 0 > hi else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import SUITES, report_json, run

    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}")
    rep = run(args.suite, args.seed)
    _write(args, report_json(rep) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


COMMANDS = {"extract": cmd_extract, "profile": cmd_profile, "systole": cmd_systole, "loops": cmd_loops,
            "surgery": cmd_surgery, "links": cmd_links, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sweepout-lab", description="Surfaces of the desingularized quadric family in S^3.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", help="homogeneous coordinates a0,...,a5 (default: central point)")
    common.add_argument("--z", help="disk parameter r,theta (default 0,0)")
    common.add_argument("--res", type=int, help="lattice resolution")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--seed", type=int, help="random seed (u64)")
    common.add_argument("--jobs", type=int, help="worker processes (default $SWEEPOUT_JOBS or 1)")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "verify":
            sp.add_argument("suite", nargs="?", default="all")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.seed is not None and not 0 <= args.seed < 2 ** 64:
        print("error: --seed must be a u64", file=sys.stderr)
        return EXIT_USAGE
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SweepoutError as exc:
        print(f"failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
