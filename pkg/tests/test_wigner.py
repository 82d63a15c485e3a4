import numpy as np
import pytest

from weylext.errors import DimensionError, UnsupportedError
from weylext.grid import Grid, hermite_oracle
from weylext.symbols import GaussianSymbol, harmonic_oscillator
from weylext.weyl import quantize, quantize_quadratic, sample_symbol
from weylext.wigner import (bopp_symbol, bopp_symbol_via_extension, cross_wigner,
                            cross_wigner_at, moyal_star, moyal_star_quadrature, wigner_operator)

G1 = Grid.uniform(1, 8.0, 64)
HS = hermite_oracle(3, G1, tail_tol=1e-9)


def test_wigner_of_ground_state():
    W = cross_wigner(HS[0], HS[0])
    x = G1.axes()[0][:, None]
    xi = G1.dual().axes()[0][None, :]
    assert np.abs(W.values - np.exp(-x ** 2 - xi ** 2) / np.pi).max() < 1e-12


def test_wigner_marginal_and_normalisation():
    W = cross_wigner(HS[2], HS[2])
    marginal = W.values.sum(axis=1).real * G1.dual().cell
    assert np.abs(marginal - np.abs(HS[2].values) ** 2).max() < 1e-12
    assert np.isclose(W.values.sum().real * W.cell(), 1.0)


def test_cross_wigner_orthogonality():
    W = cross_wigner(HS[1], HS[3])
    assert abs(W.values.sum() * W.cell()) < 1e-12


def test_cross_wigner_at_matches_grid_version():
    W = cross_wigner(HS[1], HS[2])
    x = G1.axes()[0][24:40:4]
    xi = G1.dual().axes()[0][24:40:4]
    direct = cross_wigner_at(HS[1], HS[2], x, xi)
    assert np.abs(direct - W.values[24:40:4, 24:40:4]).max() < 1e-8


def test_moyal_stargenvalue():
    H = quantize_quadratic(harmonic_oscillator(), G1)
    for j, hj in enumerate(HS):
        W = cross_wigner(hj, HS[1])
        star = moyal_star(H, wigner_operator(hj, HS[1]))
        assert (star - W * (2 * j + 1)).norm() / W.norm() < 1e-6


def test_moyal_quadrature_oracle_agrees_with_operator_route():
    a = GaussianSymbol(np.eye(2))
    b = GaussianSymbol(np.diag([2.0, 0.5]))
    star = moyal_star(quantize(a, G1), quantize(b, G1))
    idx = [(32, 32), (30, 34), (36, 29)]
    x, xi = G1.axes()[0], G1.dual().axes()[0]
    pts = np.array([[x[i], xi[k]] for i, k in idx])
    ref = moyal_star_quadrature(a, b, pts, half_width=8.0)
    got = np.array([star.values[i, k] for i, k in idx])
    assert np.abs(got - ref).max() < 1e-5


def test_moyal_product_of_gaussians_is_not_pointwise():
    a = GaussianSymbol(np.eye(2))
    star = moyal_star(quantize(a, G1), quantize(a, G1))
    pointwise = sample_symbol(a, G1).values ** 2
    assert np.abs(star.values - pointwise).max() > 1e-3


def test_bopp_symbol_agrees_with_extension():
    a = GaussianSymbol(np.array([[1.0, 0.3], [0.3, 2.0]]))
    z = np.random.default_rng(0).standard_normal((5, 4))
    assert np.allclose(bopp_symbol(a)(z), bopp_symbol_via_extension(a, 1)(z))


def test_shape_guards():
    other = hermite_oracle(0, Grid.uniform(1, 6.0, 32), tail_tol=1e-4)[0]
    with pytest.raises(DimensionError):
        cross_wigner(HS[0], other)
    with pytest.raises(UnsupportedError):
        moyal_star_quadrature(GaussianSymbol(np.eye(4)), GaussianSymbol(np.eye(4)), [[0] * 4])
