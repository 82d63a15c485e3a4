"""Closed-form phase-space symbols.

A symbol on ``R^{2m}`` is any object with a ``phase_dim`` attribute and a
``__call__(z)`` taking points with last axis of length ``2m`` ordered
``(x_1..x_m, xi_1..xi_m)``.  Quadratic and Gaussian symbols are closed
under linear changes of variables, which keeps extended symbols exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DimensionError, UnsupportedError

__all__ = [
    "Symbol",
    "QuadraticSymbol",
    "GaussianSymbol",
    "FunctionSymbol",
    "compose_linear",
    "harmonic_oscillator",
    "parse_symbol",
    "phase_variable_names",
]


class Symbol:
    """Base class; subclasses implement ``__call__`` and ``phase_dim``."""

    phase_dim: int
    name: str = "symbol"

    def __call__(self, z) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    def compose(self, R) -> "Symbol":
        """Symbol ``z -> self(R z)`` for a ``(phase_dim, d)`` matrix ``R``."""
        return FunctionSymbol(lambda z, R=np.asarray(R, float): self(np.asarray(z) @ R.T),
                              np.asarray(R).shape[1], f"{self.name}(R z)")

    def scaled(self, alpha: complex) -> "Symbol":
        return FunctionSymbol(lambda z: alpha * self(z), self.phase_dim, f"{alpha}*{self.name}")


def _check_points(z, d):
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != d:
        raise DimensionError(f"points must have last axis {d}, got {z.shape}")
    return z


@dataclass(frozen=True, eq=False)
class QuadraticSymbol(Symbol):
    """``a(z) = 1/2 Mz.z + v.z + c`` with symmetric real ``M``."""

    M: np.ndarray
    v: np.ndarray | None = None
    c: float = 0.0
    name: str = "quadratic"

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=float))
        if M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise DimensionError("M must be square of even size")
        if np.abs(M - M.T).max() > 1e-12:
            raise ValueError("M must be symmetric")
        v = np.zeros(M.shape[0]) if self.v is None else np.asarray(self.v, dtype=float)
        object.__setattr__(self, "M", (M + M.T) / 2)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "c", float(self.c))

    @property
    def phase_dim(self) -> int:
        return self.M.shape[0]

    def __call__(self, z):
        z = _check_points(z, self.phase_dim)
        return 0.5 * np.einsum("...a,ab,...b->...", z, self.M, z) + z @ self.v + self.c

    def compose(self, R) -> "QuadraticSymbol":
        R = np.asarray(R, dtype=float)
        return QuadraticSymbol(R.T @ self.M @ R, R.T @ self.v, self.c, self.name)

    def scaled(self, alpha) -> "QuadraticSymbol":
        alpha = float(np.real_if_close(alpha))
        return QuadraticSymbol(alpha * self.M, alpha * self.v, alpha * self.c, self.name)

    def to_dict(self) -> dict:
        return {"kind": "quadratic", "M": self.M.tolist(), "v": self.v.tolist(), "c": self.c}


@dataclass(frozen=True, eq=False)
class GaussianSymbol(Symbol):
    """``a(z) = amplitude * exp(-1/2 Gz.z)`` with symmetric ``G``."""

    G: np.ndarray
    amplitude: complex = 1.0
    name: str = "gaussian"

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        if G.shape[0] != G.shape[1] or G.shape[0] % 2:
            raise DimensionError("G must be square of even size")
        object.__setattr__(self, "G", (G + G.T) / 2)

    @property
    def phase_dim(self) -> int:
        return self.G.shape[0]

    def __call__(self, z):
        z = _check_points(z, self.phase_dim)
        return self.amplitude * np.exp(-0.5 * np.einsum("...a,ab,...b->...", z, self.G, z))

    def compose(self, R) -> "GaussianSymbol":
        R = np.asarray(R, dtype=float)
        return GaussianSymbol(R.T @ self.G @ R, self.amplitude, self.name)

    def scaled(self, alpha) -> "GaussianSymbol":
        return GaussianSymbol(self.G, alpha * self.amplitude, self.name)

    def to_dict(self) -> dict:
        amp = complex(self.amplitude)
        return {"kind": "gaussian", "G": self.G.tolist(), "amplitude": [amp.real, amp.imag]}


@dataclass(frozen=True, eq=False)
class FunctionSymbol(Symbol):
    """Wraps an arbitrary vectorised callable ``f(z)``."""

    func: Callable
    dim: int
    name: str = "function"

    @property
    def phase_dim(self) -> int:
        return self.dim

    def __call__(self, z):
        z = _check_points(z, self.dim)
        return np.broadcast_to(self.func(z), z.shape[:-1])

    def to_dict(self) -> dict:
        return {"kind": "function", "name": self.name, "phase_dim": self.dim}


def compose_linear(a: Symbol, R) -> Symbol:
    """``z -> a(R z)``, staying in closed form when possible."""
    R = np.asarray(R, dtype=float)
    if R.shape[0] != a.phase_dim:
        raise DimensionError(f"R has {R.shape[0]} rows, symbol needs {a.phase_dim}")
    return a.compose(R)


def harmonic_oscillator(m: int = 1) -> QuadraticSymbol:
    """``|x|^2 + |xi|^2`` on ``R^{2m}``."""
    return QuadraticSymbol(2 * np.eye(2 * m), name="x^2+xi^2")


def phase_variable_names(m: int) -> list:
    """Config variable names for ``R^{2m}`` in coordinate order."""
    if m == 1:
        return ["x", "xi"]
    if m == 2:
        return ["x", "y", "xi", "eta"]
    return [f"x{i + 1}" for i in range(m)] + [f"xi{i + 1}" for i in range(m)]


_ALIASES = {"ξ": "xi", "η": "eta"}


def parse_symbol(text: str, phase_dim: int) -> Symbol:
    """Parse a symbol expression over the phase variables.

    Polynomials of degree at most 2 become :class:`QuadraticSymbol`; other
    expressions are compiled to vectorised numpy callables.

    Raises
    ------
    ConfigError
        On syntax errors or unknown variables.
    UnsupportedError
        For polynomials of degree above 2.
    """
    import sympy

    if phase_dim % 2:
        raise DimensionError("phase dimension must be even")
    for k, v in _ALIASES.items():
        text = text.replace(k, v)
    names = phase_variable_names(phase_dim // 2)
    syms = sympy.symbols(names, real=True)
    local = dict(zip(names, syms))
    try:
        expr = sympy.sympify(text, locals=local)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse symbol {text!r}: {exc}") from exc
    extra = expr.free_symbols - set(syms)
    if extra:
        raise ConfigError(f"unknown variables {sorted(map(str, extra))} in {text!r}; "
                          f"allowed: {names}")
    if expr.is_polynomial(*syms):
        poly = sympy.Poly(expr, *syms)
        if poly.total_degree() > 2:
            raise UnsupportedError("polynomial symbols of degree > 2 are not supported")
        hess = sympy.hessian(expr, syms)
        grad = [sympy.diff(expr, s).subs({s2: 0 for s2 in syms}) for s in syms]
        const = expr.subs({s: 0 for s in syms})
        try:
            M = np.array(hess.tolist(), dtype=float)
            v = np.array(grad, dtype=float)
            c = float(const)
        except TypeError as exc:
            raise UnsupportedError("polynomial symbols must have real coefficients") from exc
        return QuadraticSymbol(M, v, c, name=text)
    func = sympy.lambdify(syms, expr, modules="numpy")

    def f(z, func=func):
        return np.asarray(func(*np.moveaxis(z, -1, 0)), dtype=complex)

    return FunctionSymbol(f, phase_dim, text)
