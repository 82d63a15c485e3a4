import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylext.errors import NotFreeError, ShapeError
from weylext.symplectic import (J, QuadraticFormW, SymplecticMatrix, bopp_matrix,
                                embed_direct_sum, is_symplectic, landau_matrix,
                                random_free_symplectic, symplectic_from_w, symplectic_inverse,
                                w_dual, w_from_symplectic)

seeds = st.integers(0, 2 ** 31 - 1)


def test_J_is_symplectic_and_squares_to_minus_identity():
    assert np.allclose(J(2) @ J(2), -np.eye(4))
    assert is_symplectic(J(3))


def test_odd_size_rejected():
    with pytest.raises(ShapeError):
        is_symplectic(np.eye(3))


def test_landau_and_bopp_are_free_symplectic():
    for s in (landau_matrix(), bopp_matrix(1), bopp_matrix(2)):
        assert is_symplectic(s.S)
        assert s.is_free()


def test_identity_is_not_free():
    with pytest.raises(NotFreeError):
        w_from_symplectic(np.eye(2))


@given(seeds, st.integers(1, 3))
def test_generating_form_round_trip(seed, m):
    s = random_free_symplectic(np.random.default_rng(seed), m=m)
    assert is_symplectic(s.S)
    assert np.abs(symplectic_from_w(w_from_symplectic(s)) - s.S).max() < 1e-10


@given(seeds)
def test_dual_form_is_form_of_inverse(seed):
    s = random_free_symplectic(np.random.default_rng(seed), m=2)
    Wd = w_dual(w_from_symplectic(s.inverse(), maslov=0))
    W = w_from_symplectic(s, maslov=2)
    for a, b in ((Wd.P, W.P), (Wd.L, W.L), (Wd.Q, W.Q)):
        assert np.abs(a - b).max() < 1e-10
    assert Wd.maslov == 2


@given(seeds)
def test_inverse_formula(seed):
    s = random_free_symplectic(np.random.default_rng(seed), m=2)
    assert np.allclose(symplectic_inverse(s.S) @ s.S, np.eye(4))


def test_fourier_form():
    W = w_from_symplectic(J(1))
    assert np.allclose(W.P, 0) and np.allclose(W.Q, 0) and np.allclose(W.L, 1)


def test_direct_sum_embedding():
    a, b = random_free_symplectic(np.random.default_rng(0)), J(1)
    s = embed_direct_sum(a, b)
    assert is_symplectic(s.S)
    assert np.allclose(s.S[np.ix_([0, 2], [0, 2])], a.S)


def test_serialisation_round_trips():
    s = landau_matrix()
    assert np.allclose(SymplecticMatrix.from_json(s.to_json()).S, s.S)
    W = w_from_symplectic(s)
    W2 = QuadraticFormW.from_dict(json.loads(json.dumps(W.to_dict())))
    assert np.allclose(W2.L, W.L) and W2.maslov == W.maslov


def test_form_evaluation():
    W = QuadraticFormW(np.eye(1), np.eye(1) * 2, np.eye(1) * 3)
    assert np.isclose(W(np.array([1.0]), np.array([2.0])), 0.5 - 4 + 6)
