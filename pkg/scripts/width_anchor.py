"""Largest area over the z = 0 slice of the desingularized family, against 2 pi^2.

Usage: python3 scripts/width_anchor.py [--res 64] [--jobs N] [--csv out.csv]
"""

import argparse
import math

from sweepout_lab.sweep import WIDTH_5, documented_width_spec, profile_rows, rows_to_csv, width_anchor


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--res", type=int, default=64)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--csv", help="also write the area profile of the slice")
    args = p.parse_args()
    spec = documented_width_spec(args.res)
    w = width_anchor(spec, args.jobs)
    print(f"members={len(spec.members())} resolution={args.res}")
    print(f"max area {w.max_area:.6f} at a={w.argmax.a}")
    print(f"2 pi^2 = {WIDTH_5:.6f}, bound (-2%) = {w.bound:.6f}, 8 pi = {8 * math.pi:.6f}")
    print("bound holds" if w.bound_ok else "bound FAILS")
    if args.csv:
        with open(args.csv, "w", newline="\n") as fh:
            fh.write(rows_to_csv(profile_rows(spec, args.jobs)))


if __name__ == "__main__":
    main()
