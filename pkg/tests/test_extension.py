import numpy as np
import pytest

from weylext.errors import DimensionError, NotFreeError, UnsupportedError
from weylext.extension import (Extension, ExtensionSpec, bopp_spec, extend_operator,
                               extend_symbol, identity_spec, landau_spec, matched_grid,
                               matched_scale, weak_form_eval)
from weylext.grid import Grid, OperatorMatrix, hermite_oracle, weighted_inner
from weylext.symbols import GaussianSymbol, QuadraticSymbol, harmonic_oscillator
from weylext.symplectic import SymplecticMatrix, embed_direct_sum, random_free_symplectic
from weylext.weyl import quantize_quadratic

H0 = harmonic_oscillator()


@pytest.fixture(scope="module")
def small_landau():
    spec = landau_spec()
    g = matched_grid(spec, 16)
    return Extension(spec, g), quantize_quadratic(H0, g)


def test_landau_symbol():
    # (x/2 - eta)^2 + (xi + y/2)^2
    a = extend_symbol(H0, landau_spec())
    z = np.array([0.3, -1.1, 0.7, 2.0])
    x, y, xi, eta = z
    assert np.isclose(a(z), (x / 2 - eta) ** 2 + (xi + y / 2) ** 2)


def test_bopp_symbol_from_spec():
    a = extend_symbol(H0, bopp_spec(1))
    z = np.array([0.3, -1.1, 0.7, 2.0])
    x, y, xi, eta = z
    assert np.isclose(a(z), (x - eta / 2) ** 2 + (y + xi / 2) ** 2)


def test_landau_symbol_has_null_direction():
    a = extend_symbol(H0, landau_spec())
    assert np.isclose(np.linalg.eigvalsh(a.M).min(), 0, atol=1e-12)


def test_extension_homomorphism(small_landau):
    ext, A = small_landau
    B = A + OperatorMatrix.identity(A.in_grid)
    lhs = ext.extend(A @ B).matrix
    rhs = (ext.extend(A) @ ext.extend(B)).matrix
    assert np.abs(lhs - rhs).max() / np.abs(rhs).max() < 1e-10


def test_identity_extension_is_tensor(small_landau):
    _, A = small_landau
    I_ext = extend_operator(A, identity_spec())
    assert np.allclose(I_ext.matrix, np.kron(A.matrix, np.eye(A.in_grid.size)))


def test_matched_scale():
    assert np.isclose(matched_scale(landau_spec()), 1.0)
    assert np.isclose(matched_scale(bopp_spec(1)), 2.0)


def test_spec_json_round_trip():
    spec = landau_spec()
    back = ExtensionSpec.from_json(spec.to_json())
    assert np.allclose(back.s.S, spec.s.S) and back.maslov == spec.maslov and back.name == "landau"


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        ExtensionSpec(1, 1, SymplecticMatrix(np.eye(6)))
    with pytest.raises(DimensionError):
        extend_symbol(harmonic_oscillator(2), landau_spec())


def test_non_free_without_factors_is_unsupported():
    s = embed_direct_sum(random_free_symplectic(np.random.default_rng(0)), np.eye(2))
    spec = ExtensionSpec(1, 1, s)
    assert spec.route == "unsupported"
    g = Grid.uniform(1, 4.0, 8)
    with pytest.raises(UnsupportedError):
        extend_operator(OperatorMatrix.identity(g), spec)
    with pytest.raises(NotFreeError):
        Extension(spec, g).s_op


def test_weak_form_matches_operator_pairing():
    # product states under the identity extension: the phase-space pairing
    # reduces to (A psi | phi)(chi | chi')
    from weylext.weyl import quantize

    g = Grid.uniform(1, 8.0, 32)
    hs = hermite_oracle(2, g, tail_tol=1e-5)
    a = GaussianSymbol(np.array([[1.0, 0.3], [0.3, 0.8]]))
    A = quantize(a, g)
    Psi, Phi = hs[0].tensor(hs[2]), hs[2].tensor(hs[2])
    ref = weighted_inner(A.apply(hs[0]), hs[2]) * weighted_inner(hs[2], hs[2])
    assert abs(weak_form_eval(a, Psi, Phi, identity_spec())) > 1e-3
    assert np.isclose(weak_form_eval(a, Psi, Phi, identity_spec()), ref, atol=1e-8)


def test_quadratic_compose_rule():
    q = QuadraticSymbol(np.diag([1.0, 2.0]), np.array([1.0, 0.0]), 0.5)
    R = np.array([[1.0, 1.0], [0.0, 1.0]])
    z = np.array([0.4, -0.3])
    assert np.isclose(q.compose(R)(z), q(R @ z))
