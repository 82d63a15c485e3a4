import numpy as np
import pytest

from weylext.errors import DegenerateError, PreconditionError
from weylext.extension import Extension, identity_spec, landau_spec, matched_grid
from weylext.grid import OperatorMatrix, StateVector, hermite_oracle, norm
from weylext.intertwine import (build_intertwiner, gram_check, gram_matrix, kernel_probe,
                                landau_intertwiner_closed, nonhypoellipticity_witness,
                                outer_mass_ratio, plane_wave, transfer_eigenpairs)
from weylext.symbols import harmonic_oscillator
from weylext.weyl import quantize_quadratic


@pytest.fixture(scope="module")
def setup():
    spec = landau_spec()
    g = matched_grid(spec, 24)
    ext = Extension(spec, g)
    A = quantize_quadratic(harmonic_oscillator(), g)
    return ext, A, ext.extend(A)


def test_gram_is_identity(setup):
    ext, _, _ = setup
    hs = hermite_oracle(2, ext.x_grid, tail_tol=1e-5)
    G = gram_matrix(ext.spec, hs, hs, ext=ext)
    assert G.shape == (9, 9)
    assert gram_check(ext.spec, hs, hs, ext=ext) < 1e-6


def test_transfer_residuals(setup):
    ext, A, A_t = setup
    hs = hermite_oracle(2, ext.x_grid, tail_tol=1e-5)
    pairs = [(2 * j + 1.0, h) for j, h in enumerate(hs)]
    out = transfer_eigenpairs(pairs, ext.spec, hs, A_tilde=A_t, ext=ext)
    assert len(out) == 9
    assert max(p.residual for p in out) < 1e-5


def test_intertwiner_adjoint_is_left_inverse(setup):
    ext, _, _ = setup
    chi = hermite_oracle(0, ext.y_grid, tail_tol=1e-5)[0]
    T = build_intertwiner(ext.spec, chi, ext=ext)
    TT = (T.adjoint() @ T.matrix).matrix
    assert np.abs(TT - np.eye(ext.x_grid.size)).max() < 1e-10
    h = hermite_oracle(1, ext.x_grid, tail_tol=1e-5)[1]
    assert norm(T.adjoint_apply(T.apply(h)) - h) < 1e-10


def test_intertwining_relation(setup):
    ext, A, A_t = setup
    chi = hermite_oracle(1, ext.y_grid, tail_tol=1e-5)[1]
    T = build_intertwiner(ext.spec, chi, ext=ext).matrix
    lhs = (A_t @ T).matrix
    rhs = (T @ A).matrix
    assert np.abs(lhs - rhs).max() / np.abs(rhs).max() < 1e-10


def test_zero_window_rejected(setup):
    ext, _, _ = setup
    with pytest.raises(DegenerateError):
        build_intertwiner(ext.spec, StateVector(ext.y_grid, np.zeros(ext.y_grid.size)), ext=ext)


def test_closed_form_landau(setup):
    ext, _, _ = setup
    h = hermite_oracle(1, ext.x_grid, tail_tol=1e-5)
    ref = landau_intertwiner_closed(h[1], h[0])
    # N = 24 is coarse; the acceptance suite checks 1e-6 at N = 48
    assert norm(ext.state(h[1], h[0]) - ref) / norm(ref) < 1e-3


def test_kernel_probe_flags(setup):
    ext, A, A_t = setup
    A1 = A - OperatorMatrix.identity(A.in_grid)
    assert not kernel_probe(A, A_t).has_kernel
    probe = kernel_probe(A1, ext.extend(A1))
    assert probe.has_kernel and probe.extended_has_kernel and probe.consistent


def test_witness_and_control(setup):
    ext, A, _ = setup
    A1 = A - OperatorMatrix.identity(A.in_grid)
    rep = nonhypoellipticity_witness(A1, ext.spec, plane_wave(ext.y_grid, 2), ext=ext)
    assert rep.success
    chi = hermite_oracle(0, ext.y_grid, tail_tol=1e-5)[0]
    phi = hermite_oracle(1, ext.x_grid, tail_tol=1e-5)[1]
    assert outer_mass_ratio(ext.state(phi, chi)) < 0.1


def test_witness_needs_kernel(setup):
    ext, A, _ = setup
    with pytest.raises(PreconditionError):
        nonhypoellipticity_witness(A, ext.spec, plane_wave(ext.y_grid, 1), ext=ext)


def test_identity_spec_witness_is_tensor():
    g = matched_grid(identity_spec(), 24)
    A = quantize_quadratic(harmonic_oscillator(), g) - OperatorMatrix.identity(g)
    rep = nonhypoellipticity_witness(A, identity_spec(), plane_wave(g, 3))
    assert rep.residual < 1e-10 and rep.outer_mass > 0.1
