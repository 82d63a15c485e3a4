"""Cross-Wigner transforms, Moyal products and Bopp operators."""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, UnsupportedError
from .extension import bopp_spec, extend_symbol
from .grid import Grid, OperatorMatrix, StateVector, interpolate
from .symbols import QuadraticSymbol, Symbol
from .weyl import SampledSymbol, dequantize, kernel_to_symbol, quantize, quantize_quadratic

__all__ = [
    "cross_wigner",
    "cross_wigner_at",
    "moyal_star",
    "moyal_star_quadrature",
    "bopp_symbol",
    "bopp_operator",
    "operator_of",
    "wigner_operator",
]


def cross_wigner(psi: StateVector, phi: StateVector) -> SampledSymbol:
    """``W(psi, phi)(x, xi) = (2 pi)^{-n} int exp(-i xi.y) psi(x + y/2) conj(phi(x - y/2)) dy``.

    Sampled on the same phase grid as symbols, so it pairs directly with
    sampled symbols in weak-form evaluations.
    """
    if not psi.grid.is_close(phi.grid):
        raise DimensionError("cross_wigner needs both vectors on one grid")
    grid = psi.grid
    K = np.outer(psi.values, phi.values.conj())
    out = kernel_to_symbol(K, grid)
    return SampledSymbol(grid, out.values / (2 * np.pi) ** grid.dim)


def cross_wigner_at(psi: StateVector, phi: StateVector, x_points, xi_points) -> np.ndarray:
    """1D cross-Wigner function at arbitrary ``(x, xi)`` pairs of a tensor mesh.

    ``psi`` and ``phi`` may live on different 1D grids; each is evaluated by
    band-limited interpolation (zero outside its box) and the ``y``
    integral is a direct trapezoid sum.  Returns shape
    ``(len(x_points), len(xi_points))``.
    """
    if psi.grid.dim != 1 or phi.grid.dim != 1:
        raise UnsupportedError("cross_wigner_at is implemented for 1D vectors")
    x_points = np.atleast_1d(np.asarray(x_points, dtype=float))
    xi_points = np.atleast_1d(np.asarray(xi_points, dtype=float))
    dy = min(psi.grid.spacing[0], phi.grid.spacing[0])
    reach = 2 * max(psi.grid.half_width[0], phi.grid.half_width[0])
    y = dy * np.arange(-int(np.ceil(reach / dy)), int(np.ceil(reach / dy)) + 1)
    phase = np.exp(-1j * np.outer(xi_points, y)) * dy / (2 * np.pi)
    out = np.empty((x_points.size, xi_points.size), dtype=complex)
    for i, x in enumerate(x_points):
        f = interpolate(psi, x + y / 2) * np.conj(interpolate(phi, x - y / 2))
        out[i] = phase @ f
    return out


def wigner_operator(psi: StateVector, phi: StateVector) -> OperatorMatrix:
    """Operator with Weyl symbol ``W(psi, phi)``: the rank-one ``(2 pi)^{-n} psi <phi|``.

    Preferable to ``quantize(cross_wigner(psi, phi))`` in products, where
    the sampled route loses accuracy to kernel truncation.
    """
    if not psi.grid.is_close(phi.grid):
        raise DimensionError("wigner_operator needs both vectors on one grid")
    grid = psi.grid
    K = np.outer(psi.values, phi.values.conj()) / (2 * np.pi) ** grid.dim
    return OperatorMatrix(grid, grid, K * grid.cell)


def operator_of(a, grid: Grid) -> OperatorMatrix:
    """Operator matrix of a symbol: exact for quadratics, sampled otherwise."""
    if isinstance(a, OperatorMatrix):
        return a
    if isinstance(a, QuadraticSymbol):
        return quantize_quadratic(a, grid)
    return quantize(a, grid)


def moyal_star(a, b, grid: Grid | None = None) -> SampledSymbol:
    """Symbol of ``Op(a) Op(b)`` computed through the operator product.

    ``a`` and ``b`` may be sampled symbols, closed-form symbols (sampled on
    ``grid``; quadratics are quantised exactly) or operator matrices.
    """
    if grid is None:
        for c in (a, b):
            if isinstance(c, SampledSymbol):
                grid = c.grid
            elif isinstance(c, OperatorMatrix):
                grid = c.in_grid
        if grid is None:
            raise DimensionError("a grid is needed for closed-form symbols")
    return dequantize(operator_of(a, grid) @ operator_of(b, grid))


def moyal_star_quadrature(a: Symbol, b: Symbol, points, half_width: float = 6.0,
                          step: float = 0.25) -> np.ndarray:
    """Direct phase-space quadrature of the twisted product (1D only).

    ``(a * b)(z) = (4 pi)^{-2} int int exp(i/2 sigma(u, v)) a(z + u/2) b(z - v/2) du dv``
    with ``sigma(u, v) = Ju.v``.  Costly; intended as an oracle on a few
    points with rapidly decaying ``a``, ``b``.
    """
    if a.phase_dim != 2 or b.phase_dim != 2:
        raise UnsupportedError("moyal_star_quadrature is implemented on R^2")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    t = np.arange(-half_width, half_width + step / 2, step)
    U = np.stack(np.meshgrid(t, t, indexing="ij"), -1).reshape(-1, 2)
    w = step ** 4 / (4 * np.pi) ** 2
    out = np.empty(len(pts), dtype=complex)
    for p, z in enumerate(pts):
        av = a(z + U / 2)
        bv = b(z - U / 2)
        # sigma(u, v) = u_xi v_x - u_x v_xi
        sig = np.outer(U[:, 1], U[:, 0]) - np.outer(U[:, 0], U[:, 1])
        out[p] = w * (av @ np.exp(0.5j * sig) @ bv)
    return out


def _bopp_rows(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    # (x - eta/2, y + xi/2) from (x, y, xi, eta)
    return np.block([[eye, zero, zero, -0.5 * eye], [zero, eye, 0.5 * eye, zero]])


def bopp_symbol(a: Symbol, n: int | None = None) -> Symbol:
    """``a_B(x, y; xi, eta) = a(x - eta/2, y + xi/2)`` on ``R^{4n}``."""
    n = a.phase_dim // 2 if n is None else n
    if a.phase_dim != 2 * n:
        raise DimensionError("symbol dimension does not match n")
    return a.compose(_bopp_rows(n))


def bopp_operator(a: Symbol, n: int, grid: Grid) -> OperatorMatrix:
    """Weyl quantisation of the Bopp symbol on a ``2n``-dimensional grid."""
    if grid.dim != 2 * n:
        raise DimensionError("Bopp operators act on a grid of dimension 2n")
    return operator_of(bopp_symbol(a, n), grid)


def bopp_symbol_via_extension(a: Symbol, n: int) -> Symbol:
    """Same symbol obtained through the generic extension map."""
    return extend_symbol(a, bopp_spec(n))
