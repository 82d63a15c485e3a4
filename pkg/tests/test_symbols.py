import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylext.errors import ConfigError, UnsupportedError
from weylext.symbols import (FunctionSymbol, GaussianSymbol, QuadraticSymbol, compose_linear,
                             harmonic_oscillator, parse_symbol, phase_variable_names)


def test_variable_names():
    assert phase_variable_names(1) == ["x", "xi"]
    assert phase_variable_names(2) == ["x", "y", "xi", "eta"]


def test_parse_quadratic():
    a = parse_symbol("x**2 + xi**2", 2)
    assert isinstance(a, QuadraticSymbol)
    assert np.allclose(a.M, harmonic_oscillator().M)


def test_parse_affine_terms_and_unicode():
    a = parse_symbol("(x - η/2)**2 + 3*y + 1", 4)
    z = np.array([1.0, 2.0, 0.5, -1.0])
    assert np.isclose(a(z), (1.0 + 0.5) ** 2 + 6 + 1)


def test_parse_general_expression():
    a = parse_symbol("exp(-(x**2 + xi**2)/2)", 2)
    assert isinstance(a, FunctionSymbol)
    z = np.array([[0.0, 0.0], [1.0, 1.0]])
    assert np.allclose(a(z), [1.0, np.exp(-1)])


def test_parse_errors():
    with pytest.raises(ConfigError):
        parse_symbol("x +* 2", 2)
    with pytest.raises(ConfigError):
        parse_symbol("x + q", 2)
    with pytest.raises(UnsupportedError):
        parse_symbol("x**3", 2)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 3))
def test_gaussian_compose(x, xi, t):
    a = GaussianSymbol(np.diag([1.0, 2.0]), amplitude=2.0)
    R = np.array([[t, 0.0], [0.0, 1 / t]])
    z = np.array([x, xi])
    assert np.isclose(compose_linear(a, R)(z), a(R @ z))
