"""Weyl symbols, Schwartz kernels and operator matrices on grids.

Symbols are sampled on the phase grid ``positions x dual frequencies``.
With ``dx`` the position spacing the frequency nodes are
``xi_k = -pi/dx + k*dxi`` with ``dxi = 2*pi/(N*dx)``.

Conventions (``hbar = 1``)::

    K(x, y) = (2 pi)^{-n} int exp(i xi.(x - y)) a((x + y)/2, xi) dxi
    a(x, xi) = int exp(-i xi.y) K(x + y/2, x - y/2) dy

and the operator matrix is ``M[i, j] = K(x_i, x_j) * dx^n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConventionError, DimensionError, UnsupportedError
from .grid import Grid, OperatorMatrix, momentum_matrix, position_matrix, trig_interp_matrix
from .symbols import QuadraticSymbol, Symbol

__all__ = [
    "SampledSymbol",
    "sample_symbol",
    "symbol_to_kernel",
    "quantize",
    "dequantize",
    "quantize_quadratic",
    "kernel_to_symbol",
]


@dataclass(frozen=True, eq=False)
class SampledSymbol:
    """Symbol values on ``grid x grid.dual()``.

    ``values`` has shape ``grid.shape + grid.shape``: position axes first,
    then the matching frequency axes.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        want = self.grid.shape + self.grid.shape
        if vals.shape != want:
            if vals.size != int(np.prod(want)):
                raise DimensionError(f"symbol values of shape {vals.shape}, expected {want}")
            vals = vals.reshape(want)
        object.__setattr__(self, "values", vals)

    @property
    def phase_grid(self) -> Grid:
        return self.grid.product(self.grid.dual())

    @property
    def n(self) -> int:
        return self.grid.dim

    def cell(self) -> float:
        """Phase-space quadrature weight ``prod(dx * dxi)``."""
        return self.phase_grid.cell

    def conj(self) -> "SampledSymbol":
        return SampledSymbol(self.grid, self.values.conj())

    def __add__(self, other):
        return SampledSymbol(self.grid, self.values + other.values)

    def __sub__(self, other):
        return SampledSymbol(self.grid, self.values - other.values)

    def __mul__(self, alpha):
        return SampledSymbol(self.grid, alpha * self.values)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell()))


def sample_symbol(a: Symbol, grid: Grid) -> SampledSymbol:
    """Evaluate a closed-form symbol on ``grid x grid.dual()``."""
    if a.phase_dim != 2 * grid.dim:
        raise DimensionError(f"symbol on R^{a.phase_dim} cannot be sampled on a {grid.dim}D grid")
    z = grid.product(grid.dual()).nodes()
    return SampledSymbol(grid, np.asarray(a(z), dtype=complex).reshape(grid.shape * 2))


def _half_nodes(axis_grid: Grid) -> np.ndarray:
    L = axis_grid.half_width[0]
    dx = axis_grid.spacing[0]
    return -L + 0.5 * dx * np.arange(2 * axis_grid.points[0])


def symbol_to_kernel(a: SampledSymbol) -> np.ndarray:
    """Kernel ``K(x_i, x_j)`` as an array of shape ``(size, size)``.

    Midpoints ``(x_i + x_j)/2`` lie on the half-step lattice; the symbol is
    carried there by band-limited interpolation along each position axis.
    The frequency integral is an exact discrete sum over the dual grid.
    """
    grid = a.grid
    n = grid.dim
    vals = a.values
    # refine positions onto the half-step lattice
    for ax in range(n):
        G = trig_interp_matrix(grid.axis(ax), _half_nodes(grid.axis(ax)))
        vals = np.moveaxis(np.tensordot(G, vals, axes=([1], [ax])), 0, ax)
    # g[p, r] = sum_k exp(i xi_k r dx) a_h[p, k], r taken mod N
    for ax in range(n):
        N = grid.points[ax]
        sign = ((-1.0) ** np.arange(N)).reshape([N if d == n + ax else 1 for d in range(2 * n)])
        vals = np.fft.ifft(vals, axis=n + ax) * N * sign
    # gather K[i, j] = c * g[i + j, (i - j) mod N] per axis; the frequency sum
    # is N-periodic in i - j, so only the principal offsets |i - j| <= N/2 are
    # kept (the two ends at half weight)
    idx_p, idx_r = [], []
    weight = np.ones((grid.size, grid.size))
    for ax in range(n):
        N = grid.points[ax]
        off = np.abs(np.subtract.outer(np.arange(N), np.arange(N)))
        w1 = np.where(off < N // 2, 1.0, np.where(off == N // 2, 0.5, 0.0))
        sub = [np.ones((p, p)) for p in grid.points]
        sub[ax] = w1
        w = sub[0]
        for m in sub[1:]:
            w = np.kron(w, m)
        weight *= w
    for ax in range(n):
        N = grid.points[ax]
        i = np.arange(N)
        shape_i = [1] * (2 * n)
        shape_j = [1] * (2 * n)
        shape_i[ax] = N
        shape_j[n + ax] = N
        ii = i.reshape(shape_i)
        jj = i.reshape(shape_j)
        idx_p.append(ii + jj)
        idx_r.append((ii - jj) % N)
    K = vals[tuple(idx_p) + tuple(idx_r)]
    dxi = grid.dual().spacing
    K = K * np.prod([d / (2 * np.pi) for d in dxi])
    return K.reshape(grid.size, grid.size) * weight


def quantize(a, grid: Grid | None = None) -> OperatorMatrix:
    """Weyl quantisation of a sampled (or closed-form) symbol.

    ``M[i, j] = K(x_i, x_j) dx^n`` so ``M @ psi`` approximates ``A psi`` at
    the nodes.  Closed-form symbols are sampled on ``grid`` first.
    """
    if not isinstance(a, SampledSymbol):
        if grid is None:
            raise ConventionError("a grid is required to quantize a closed-form symbol")
        a = sample_symbol(a, grid)
    elif grid is not None and not grid.is_close(a.grid):
        raise ConventionError("symbol is sampled on a different grid")
    K = symbol_to_kernel(a)
    return OperatorMatrix.square(a.grid, K * a.grid.cell)


def _weyl_pairs(K: np.ndarray, s_ax: int, t_ax: int) -> np.ndarray:
    """Map kernel axes ``(s, t)`` to ``(i, m)`` with ``K(x_i + m dx/2, x_i - m dx/2)``.

    ``m`` runs over ``-N..N-1``.  Even ``m`` read grid entries directly;
    odd ``m`` sit between nodes along a line of constant ``s - t`` and are
    obtained by a half-step band-limited shift along that line.  Points
    outside the box are zero.  The ``s`` axis is replaced by ``i`` and the
    ``t`` axis by ``m`` (length ``2N``).
    """
    K = np.moveaxis(K, (s_ax, t_ax), (-2, -1))
    N = K.shape[-1]
    i = np.arange(N)[:, None]
    m = np.arange(-N, N)[None, :]
    out = np.zeros(K.shape[:-2] + (N, 2 * N), dtype=complex)

    even = (m % 2 == 0)
    s = i + m // 2
    t = i - m // 2
    ok = even & (s >= 0) & (s < N) & (t >= 0) & (t < N)
    ii, mm = np.nonzero(ok)
    out[..., ii, mm] = K[..., s[ii, mm], t[ii, mm]]

    # odd offsets: lines u -> K[u, u - d], shifted by half a step
    d = np.arange(-N + 1, N, 2)
    u = np.arange(N)
    lines = K[..., u[None, :], (u[None, :] - d[:, None]) % N]
    k = np.fft.fftfreq(N, 1.0 / N)
    shift = np.exp(1j * np.pi * k / N)
    shift[N // 2] = 0.0
    half = np.fft.ifft(np.fft.fft(lines, axis=-1) * shift, axis=-1)
    # value at s = u + 1/2 with s = i + d/2
    for col, dd in enumerate(d):
        s_half = i[:, 0] + dd / 2.0
        t_half = i[:, 0] - dd / 2.0
        valid = (s_half > 0) & (s_half < N - 1) & (t_half > 0) & (t_half < N - 1)
        src = (i[:, 0] + (dd - 1) // 2) % N
        rows = np.nonzero(valid)[0]
        out[..., rows, dd + N] = half[..., col, src[rows]]
    return np.moveaxis(out, (-2, -1), (s_ax, t_ax))


def kernel_to_symbol(K: np.ndarray, grid: Grid) -> SampledSymbol:
    """Weyl symbol of a kernel array ``K`` (shape ``(size, size)``).

    ``a(x_i, xi_k) = sum_m exp(-i xi_k m dx) K(x_i + m dx/2, x_i - m dx/2) dx``
    per axis, with ``m`` over ``-N..N-1``.
    """
    n = grid.dim
    K = np.asarray(K, dtype=complex).reshape(grid.shape * 2)
    for ax in range(n):
        K = _weyl_pairs(K, ax, n + ax)
    for ax in range(n):
        N = grid.points[ax]
        dx = grid.spacing[ax]
        axis = n + ax
        sign = ((-1.0) ** np.arange(-N, N)).reshape([2 * N if d == axis else 1 for d in range(2 * n)])
        K = K * sign
        folded = np.take(K, np.arange(N), axis=axis) + np.take(K, np.arange(N, 2 * N), axis=axis)
        # index 0 of the fold corresponds to m = -N, i.e. residue 0 mod N
        K = np.fft.fft(folded, axis=axis) * dx
    return SampledSymbol(grid, K)


def dequantize(M: OperatorMatrix) -> SampledSymbol:
    """Weyl symbol of an operator matrix (inverse of :func:`quantize`)."""
    if not M.in_grid.is_close(M.out_grid):
        raise DimensionError("dequantize needs a square operator on one grid")
    grid = M.in_grid
    return kernel_to_symbol(M.matrix / grid.cell, grid)


def _symmetrized(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return 0.5 * (A @ B + B @ A)


def quantize_quadratic(q: QuadraticSymbol, grid: Grid) -> OperatorMatrix:
    """Exact Weyl quantisation of ``1/2 Mz.z + v.z + c``.

    Each monomial ``z_a z_b`` becomes the symmetrised product
    ``(Z_a Z_b + Z_b Z_a)/2`` of position matrices (diagonal) and spectral
    momentum matrices, which is the Weyl rule for degree at most 2.
    """
    if not isinstance(q, QuadraticSymbol):
        raise UnsupportedError("quantize_quadratic needs a QuadraticSymbol of degree <= 2")
    n = grid.dim
    if q.phase_dim != 2 * n:
        raise DimensionError(f"symbol on R^{q.phase_dim} does not match a {n}D grid")
    Z = [position_matrix(grid, a).astype(complex) for a in range(n)]
    Z += [momentum_matrix(grid, a) for a in range(n)]
    out = q.c * np.eye(grid.size, dtype=complex)
    for a in range(2 * n):
        if q.v[a]:
            out += q.v[a] * Z[a]
        for b in range(a, 2 * n):
            coef = q.M[a, b] if a != b else 0.5 * q.M[a, a]
            if coef:
                out += coef * _symmetrized(Z[a], Z[b]) if a != b else coef * (Z[a] @ Z[a])
    return OperatorMatrix.square(grid, out)
