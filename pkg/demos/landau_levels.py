"""Landau levels from the harmonic oscillator.

The Landau Hamiltonian on R^2 is the extension of x^2 + xi^2 by a free
symplectic map of R^4.  Conjugating H0 (x) I with the metaplectic pair
gives an operator whose spectrum is that of H0, each level repeated once
per y-grid node.  Eigenvectors come for free through the intertwiners.

Run:  python demos/landau_levels.py [N]
"""
import sys
import time

import numpy as np

from weylext import (Extension, extend_symbol, harmonic_oscillator, hermite_oracle, landau_spec,
                     matched_grid, quantize_quadratic, spectrum_report, transfer_eigenpairs)
from weylext.spectral import match_levels

N = int(sys.argv[1]) if len(sys.argv) > 1 else 32

spec = landau_spec()
grid = matched_grid(spec, N)
print(f"x grid: N={N}, L={grid.half_width[0]:.3f}, dx={grid.spacing[0]:.4f}")

t0 = time.perf_counter()
ext = Extension(spec, grid)
H0 = quantize_quadratic(harmonic_oscillator(), grid)
H_tensor = ext.extend(H0)
H_direct = quantize_quadratic(extend_symbol(harmonic_oscillator(), spec), ext.grid)
print(f"built {ext.grid.size}x{ext.grid.size} operators in {time.perf_counter() - t0:.1f} s")

for name, M in (("tensor", H_tensor), ("direct", H_direct)):
    rep = spectrum_report(M, name, gap=1e-3, min_multiplicity=3)
    print(f"\n{name} route")
    for row in match_levels(rep, [1, 3, 5, 7], 1e-3):
        print(f"  level {row['target']:g}: value {row['value']:.10f}  "
              f"multiplicity {row['multiplicity']}")

# eigenvectors T_{h_l} h_j of the Landau operator
hs = hermite_oracle(2, grid, tail_tol=1e-5)
pairs = [(2 * j + 1.0, h) for j, h in enumerate(hs)]
out = transfer_eigenpairs(pairs, spec, hs, A_tilde=H_tensor, ext=ext)
print("\ntransferred eigenpairs (j, l, lambda, relative residual)")
for p in out:
    print(f"  {p.j} {p.l} {p.value:4.1f} {p.residual:.2e}")
print(f"\nworst residual {max(p.residual for p in out):.2e}")
