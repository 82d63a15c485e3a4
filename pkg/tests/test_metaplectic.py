import numpy as np
from hypothesis import given, settings, strategies as st

from weylext.grid import Grid, StateVector, hermite_oracle, norm
from weylext.metaplectic import (build_metaplectic, inverse_metaplectic, projected_symplectic,
                                 resolved_subspace, unitarity_defect)
from weylext.symbols import GaussianSymbol
from weylext.symplectic import J, landau_matrix, random_free_symplectic, w_from_symplectic
from weylext.weyl import quantize

G1 = Grid.uniform(1, 8.0, 64)


def test_fourier_case_maps_gaussian_to_itself():
    # s = J gives the Fourier transform up to the Maslov phase
    S = build_metaplectic(w_from_symplectic(J(1)), G1)
    g = StateVector.from_function(G1, lambda x: np.pi ** -0.25 * np.exp(-x ** 2 / 2))
    out = S.apply(g)
    ratio = out.values[28:36] / g.values[28:36]
    assert np.allclose(ratio, ratio[0], atol=1e-10)
    assert np.isclose(abs(ratio[0]), 1, atol=1e-10)


def test_hermite_functions_are_fourier_eigenvectors():
    S = build_metaplectic(w_from_symplectic(J(1)), G1)
    hs = hermite_oracle(3, G1, tail_tol=1e-6)
    phases = [(S.apply(h).values @ h.values.conj()) * G1.cell for h in hs]
    for k in range(1, 4):
        assert np.isclose(phases[k] / phases[0], (-1j) ** k, atol=1e-8)


def test_inverse_pair_on_hermite_class():
    W = w_from_symplectic(random_free_symplectic(np.random.default_rng(1), min_det_b=0.4))
    S = build_metaplectic(W, G1, oversample=4)
    S_inv = inverse_metaplectic(W, G1, oversample=4)
    for h in hermite_oracle(4, G1, tail_tol=1e-9):
        assert norm(S_inv.apply(S.apply(h)) - h) < 1e-8


def test_matched_grid_is_exactly_unitary():
    from weylext.extension import landau_spec, matched_grid
    spec = landau_spec()
    g = matched_grid(spec, 12)
    M = build_metaplectic(spec.form, g.product(g))
    assert unitarity_defect(M) < 1e-12


def test_projected_symplectic_matches_generator():
    s = landau_matrix()
    W = w_from_symplectic(s)
    assert np.allclose(projected_symplectic(W), s.S)


def test_resolved_subspace_orthonormal():
    W = w_from_symplectic(random_free_symplectic(np.random.default_rng(2)))
    g = Grid.uniform(1, 6.0, 32)
    V = resolved_subspace(build_metaplectic(W, g), tol=1e-2)
    assert np.allclose(V.conj().T @ V, np.eye(V.shape[1]), atol=1e-10)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_covariance_random_free(seed):
    a = GaussianSymbol(np.eye(2))
    s = random_free_symplectic(np.random.default_rng(seed), min_det_b=0.4)
    W = w_from_symplectic(s)
    S = build_metaplectic(W, G1, oversample=4)
    S_inv = inverse_metaplectic(W, G1, oversample=4)
    A, A_s = quantize(a, G1), quantize(a.compose(s.S), G1)
    for h in hermite_oracle(4, G1, tail_tol=1e-9):
        assert norm(A_s.apply(h) - S_inv.apply(A.apply(S.apply(h)))) < 1e-5
