"""Systoles of flat and slit tori, against their exact values.

Usage: python3 scripts/systole_demo.py
"""

from sweepout_lab.homology import systole
from sweepout_lab.mesh import flat_torus, slit_torus


def main():
    for A, B, m, n in [(2.0, 0.5, 64, 16), (1.0, 1.0, 32, 32), (3.0, 0.25, 96, 8)]:
        _, L = systole(flat_torus(A, B, m, n))
        print(f"flat {A}x{B} ({m}x{n}): systole={L:.5f} exact={min(A, B):.5f}")
    for L in (2.0, 3.0, 4.0):
        S = slit_torus(L)
        _, s = systole(S)
        print(f"slit torus L={L}: systole={s:.4f}, lower bound L - edge = {L - S.edge_lengths.max():.4f}")


if __name__ == "__main__":
    main()
