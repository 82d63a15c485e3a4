"""Wigner functions of Hermite functions and the star-genvalue equation.

h0 * W(h_j, h_l) = (2j + 1) W(h_j, h_l): the Wigner function of a pair of
oscillator eigenfunctions is a left eigenfunction of the Moyal product by
the oscillator symbol.  Also writes W(h_2, h_2) as a CSV table.

Run:  python demos/wigner_moyal.py [out.csv]
"""
import sys

import numpy as np

from weylext import Grid, cross_wigner, harmonic_oscillator, hermite_oracle, moyal_star
from weylext import quantize_quadratic, wigner_operator
from weylext.io import wigner_csv, write_text

grid = Grid.uniform(1, 8.0, 64)
hs = hermite_oracle(3, grid, tail_tol=1e-9)
H = quantize_quadratic(harmonic_oscillator(), grid)

print("relative error of h0 * W(h_j, h_l) - (2j+1) W(h_j, h_l)")
for j, hj in enumerate(hs):
    row = []
    for hl in hs:
        W = cross_wigner(hj, hl)
        star = moyal_star(H, wigner_operator(hj, hl))
        row.append((star - W * (2 * j + 1)).norm() / W.norm())
    print("  j=%d  " % j + "  ".join(f"{e:.1e}" for e in row))

W = cross_wigner(hs[2], hs[2])
print(f"\nW(h2, h2): integral {W.values.sum().real * W.cell():.12f}, "
      f"value at origin {W.values[32, 32].real:.6f} (expected {1 / np.pi:.6f})")
if len(sys.argv) > 1:
    write_text(sys.argv[1], wigner_csv(W))
    print(f"wrote {sys.argv[1]}")
