"""Symplectic covariance, then a non-decaying solution of an extended equation.

Part 1 checks Op(a o s) = S^-1 Op(a) S for a Gaussian symbol and a few
random free symplectic matrices s of R^2.

Part 2 takes A = H0 - 1, which has the ground state in its kernel, and
extends it with the Landau map.  Feeding a plane wave in y to the
intertwiner yields Phi with A~ Phi = 0 that does not decay: the extended
operator is not globally hypoelliptic even though A is.

Run:  python demos/covariance_and_witness.py
"""
import numpy as np

from weylext import (Extension, GaussianSymbol, Grid, OperatorMatrix, build_metaplectic,
                     harmonic_oscillator, hermite_oracle, inverse_metaplectic, landau_spec,
                     matched_grid, nonhypoellipticity_witness, norm, quantize, quantize_quadratic,
                     random_free_symplectic, w_from_symplectic)
from weylext.intertwine import plane_wave

grid = Grid.uniform(1, 8.0, 64)
a = GaussianSymbol(np.eye(2))
A = quantize(a, grid)
hs = hermite_oracle(4, grid, tail_tol=1e-9)
rng = np.random.default_rng(0)
print("covariance residual max_j ||Op(a o s) h_j - S^-1 Op(a) S h_j||")
for _ in range(3):
    s = random_free_symplectic(rng, min_det_b=0.4)
    W = w_from_symplectic(s)
    S, S_inv = (build_metaplectic(W, grid, oversample=4),
                inverse_metaplectic(W, grid, oversample=4))
    A_s = quantize(a.compose(s.S), grid)
    res = max(norm(A_s.apply(h) - S_inv.apply(A.apply(S.apply(h)))) for h in hs)
    print(f"  s = {np.round(s.S, 3).tolist()}  residual {res:.2e}")

spec = landau_spec()
g = matched_grid(spec, 32)
ext = Extension(spec, g)
A1 = quantize_quadratic(harmonic_oscillator(), g) - OperatorMatrix.identity(g)
rep = nonhypoellipticity_witness(A1, spec, plane_wave(g, 3), ext=ext)
print(f"\nwitness: ||A~ Phi||/||Phi|| = {rep.residual:.2e}, "
      f"mass near the box edge = {rep.outer_mass:.3f}")
