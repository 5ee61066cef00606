"""Genus of the desingularized family on the slices used by the acceptance suite.

Usage: python3 scripts/genus_table.py [--res 128] [--seed 0]
"""

import argparse
import time

from sweepout_lab import GridSpec
from sweepout_lab.sweep import genus_table_samples, member_genus


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--res", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    grid = GridSpec(args.res)
    bad = 0
    for s in genus_table_samples(args.seed):
        t = time.perf_counter()
        g = member_genus(s.a, s.z, grid)
        ok = s.accepts(g)
        bad += not ok
        print(f"{s.label:18s} {s.a} r={s.z.r:.3f} theta={s.z.theta:.3f} genus={g} (want {s.expected}) "
              f"{'ok' if ok else 'FAIL'} {time.perf_counter() - t:.1f}s", flush=True)
    print(f"failures={bad}")


if __name__ == "__main__":
    main()
