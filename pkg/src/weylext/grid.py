"""Uniform grids, grid vectors and matrices, quadrature and Fourier primitives.

All grids are tensor products of uniform axes with nodes
``x_i = -L + i*dx`` (``i = 0..N-1``, ``dx = 2L/N``, ``N`` even).  Multi-axis
arrays are flattened in C order, so the first axis is the slowest index
("x-major, y-minor" for a product of an x grid and a y grid).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ContractError, DimensionError, DomainError, ShapeError

__all__ = [
    "Grid",
    "StateVector",
    "OperatorMatrix",
    "EighResult",
    "weighted_inner",
    "norm",
    "dft",
    "idft",
    "eigh",
    "hermite_oracle",
    "hermite_values",
    "trig_interp_matrix",
    "interpolate",
    "position_matrix",
    "momentum_matrix",
]


def _as_tuple(value, dim, cast):
    if np.ndim(value) == 0:
        return tuple(cast(value) for _ in range(dim))
    out = tuple(cast(v) for v in value)
    if len(out) != dim:
        raise DimensionError(f"expected {dim} per-axis values, got {len(out)}")
    return out


@dataclass(frozen=True)
class Grid:
    """Tensor-product uniform grid on a box ``[-L_a, L_a)``.

    Parameters
    ----------
    half_width : tuple of float
        ``L_a`` per axis.
    points : tuple of int
        ``N_a`` per axis, each even.
    """

    half_width: tuple
    points: tuple

    def __post_init__(self):
        hw = tuple(float(v) for v in self.half_width)
        pts = tuple(int(v) for v in self.points)
        if len(hw) != len(pts) or not hw:
            raise DimensionError("half_width and points must have the same nonzero length")
        if any(h <= 0 for h in hw):
            raise ValueError("half widths must be positive")
        if any(n <= 0 or n % 2 for n in pts):
            raise ValueError("points per axis must be even and positive")
        object.__setattr__(self, "half_width", hw)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, dim: int, half_width: float, points: int) -> "Grid":
        return cls(_as_tuple(half_width, dim, float), _as_tuple(points, dim, int))

    @classmethod
    def matched(cls, dim: int, points: int, scale: float = 1.0) -> "Grid":
        """Grid whose spacing satisfies ``scale * dx**2 = 2*pi/N``.

        On such a grid the phase ``exp(-i*scale*x_i*x_j)`` is an exact
        discrete Fourier matrix, so quadratic-phase operators whose cross
        term is ``scale`` times a permutation are unitary on the grid.
        """
        dx = np.sqrt(2 * np.pi / (points * scale))
        return cls.uniform(dim, points * dx / 2, points)

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> tuple:
        return tuple(2 * h / n for h, n in zip(self.half_width, self.points))

    @property
    def cell(self) -> float:
        """Quadrature weight ``prod(dx_a)``."""
        return float(np.prod(self.spacing))

    @property
    def shape(self) -> tuple:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    def axis(self, a: int) -> "Grid":
        return Grid((self.half_width[a],), (self.points[a],))

    def axes(self) -> list:
        """Node coordinates per axis."""
        return [-h + d * np.arange(n) for h, d, n in zip(self.half_width, self.spacing, self.points)]

    def nodes(self) -> np.ndarray:
        """All nodes as an array of shape ``(size, dim)`` in C order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def dual(self) -> "Grid":
        """Frequency grid: ``N`` points, spacing ``2*pi/(N*dx)``, centred at 0."""
        return Grid(tuple(np.pi / d for d in self.spacing), self.points)

    def product(self, other: "Grid") -> "Grid":
        return Grid(self.half_width + other.half_width, self.points + other.points)

    def split(self, n: int) -> tuple:
        """Split into the first ``n`` axes and the remaining ones."""
        if not 0 < n < self.dim:
            raise DimensionError("split index out of range")
        return (Grid(self.half_width[:n], self.points[:n]),
                Grid(self.half_width[n:], self.points[n:]))

    def is_close(self, other: "Grid", rtol: float = 1e-12) -> bool:
        return (self.points == other.points
                and np.allclose(self.half_width, other.half_width, rtol=rtol, atol=0))

    def to_dict(self) -> dict:
        return {"half_width": list(self.half_width), "points": list(self.points),
                "spacing": list(self.spacing)}

    @classmethod
    def from_dict(cls, data: dict) -> "Grid":
        return cls(tuple(data["half_width"]), tuple(data["points"]))


def _check_same(g1: Grid, g2: Grid):
    if not g1.is_close(g2):
        raise DimensionError(f"grid mismatch: {g1} vs {g2}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Samples of a function on a grid (flattened in C order)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).ravel()
        if vals.size != self.grid.size:
            raise DimensionError(f"{vals.size} values for a grid of {self.grid.size} nodes")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "StateVector":
        """Sample ``func(*coords)`` where ``coords`` are broadcast node arrays."""
        mesh = np.meshgrid(*grid.axes(), indexing="ij")
        return cls(grid, np.broadcast_to(func(*mesh), grid.shape))

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def norm(self) -> float:
        return norm(self)

    def __add__(self, other):
        _check_same(self.grid, other.grid)
        return StateVector(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same(self.grid, other.grid)
        return StateVector(self.grid, self.values - other.values)

    def __mul__(self, alpha):
        return StateVector(self.grid, alpha * self.values)

    __rmul__ = __mul__

    def conj(self) -> "StateVector":
        return StateVector(self.grid, self.values.conj())

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.grid.product(other.grid), np.kron(self.values, other.values))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix acting on grid vectors.

    Rows index ``out_grid`` nodes, columns ``in_grid`` nodes.  When
    ``quadrature_absorbed`` is true the column weight is already folded in,
    so applying the operator is a plain matrix-vector product.
    """

    in_grid: Grid
    out_grid: Grid
    entries: np.ndarray
    quadrature_absorbed: bool = True

    def __post_init__(self):
        ent = np.asarray(self.entries, dtype=complex)
        if ent.shape != (self.out_grid.size, self.in_grid.size):
            raise DimensionError(
                f"matrix shape {ent.shape} does not match grids "
                f"({self.out_grid.size}, {self.in_grid.size})")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def square(cls, grid: Grid, entries) -> "OperatorMatrix":
        return cls(grid, grid, entries)

    @property
    def matrix(self) -> np.ndarray:
        """Entries with the quadrature weight absorbed."""
        if self.quadrature_absorbed:
            return self.entries
        return self.entries * self.in_grid.cell

    def apply(self, v: StateVector) -> StateVector:
        _check_same(v.grid, self.in_grid)
        return StateVector(self.out_grid, self.matrix @ v.values)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return self.apply(other)
        _check_same(self.in_grid, other.out_grid)
        return OperatorMatrix(other.in_grid, self.out_grid, self.matrix @ other.matrix)

    def __add__(self, other):
        _check_same(self.in_grid, other.in_grid)
        _check_same(self.out_grid, other.out_grid)
        return OperatorMatrix(self.in_grid, self.out_grid, self.matrix + other.matrix)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, alpha):
        return OperatorMatrix(self.in_grid, self.out_grid, alpha * self.matrix)

    __rmul__ = __mul__

    def adjoint(self) -> "OperatorMatrix":
        """Adjoint with respect to the weighted inner products.

        Both grids carry their own quadrature weight, so the weighted
        adjoint is ``(w_in / w_out) * M^H``; for square operators that
        is just ``M^H``.
        """
        ratio = self.in_grid.cell / self.out_grid.cell
        return OperatorMatrix(self.out_grid, self.in_grid, self.matrix.conj().T / ratio)

    @property
    def H(self) -> "OperatorMatrix":
        return self.adjoint()

    def hermitian_defect(self) -> float:
        m = self.matrix
        scale = np.linalg.norm(m)
        return float(np.linalg.norm(m - m.conj().T) / scale) if scale else 0.0

    @classmethod
    def identity(cls, grid: Grid) -> "OperatorMatrix":
        return cls(grid, grid, np.eye(grid.size))


def weighted_inner(u: StateVector, v: StateVector) -> complex:
    """Discrete ``(u|v) = sum conj(v) u * cell``, linear in ``u``."""
    _check_same(u.grid, v.grid)
    return complex(np.vdot(v.values, u.values) * u.grid.cell)


def norm(u: StateVector) -> float:
    return float(np.sqrt(max(weighted_inner(u, u).real, 0.0)))


def _dft_axis(arr: np.ndarray, axis: int, n: int, sign: int) -> np.ndarray:
    # phase of exp(-i*sign*xi_j*x_i) on centred grids, split into FFT plus signs
    idx = np.arange(n)
    alt = (-1.0) ** idx
    shape = [1] * arr.ndim
    shape[axis] = n
    alt = alt.reshape(shape)
    pre = np.exp(-1j * sign * np.pi * n / 2)
    if sign > 0:
        out = np.fft.fft(arr * alt, axis=axis)
    else:
        out = np.fft.ifft(arr * alt, axis=axis) * n
    return pre * out * alt


def dft(f: StateVector, sign: int = 1, axes: Sequence[int] | None = None) -> StateVector:
    """Quadrature Fourier transform onto the dual grid.

    ``F[f](xi_j) = sum_i exp(-1j*sign*xi_j*x_i) f(x_i) dx`` on the listed
    axes (all by default).  Prefactors such as ``(2*pi)**(-d/2)`` are left
    to the caller.  The dual of the dual grid is the original grid, and
    ``dft(dft(f, +1), -1) == (2*pi)**d * f``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    grid = f.grid
    axes = range(grid.dim) if axes is None else list(axes)
    arr = f.as_array()
    hw = list(grid.half_width)
    for a in axes:
        arr = _dft_axis(arr, a, grid.points[a], sign) * grid.spacing[a]
        hw[a] = np.pi / grid.spacing[a]
    return StateVector(Grid(tuple(hw), grid.points), arr)


def idft(g: StateVector) -> StateVector:
    """Inverse of :func:`dft` with ``sign=+1``."""
    out = dft(g, -1)
    return StateVector(out.grid, out.values / (2 * np.pi) ** g.grid.dim)


@dataclass(frozen=True, eq=False)
class EighResult:
    values: np.ndarray
    vectors: np.ndarray
    hermitian_defect: float = 0.0


def eigh(M, hermiticity_tol: float = 1e-8) -> EighResult:
    """Eigen-decomposition of a (numerically) Hermitian matrix.

    The matrix is symmetrised first and the relative defect
    ``||M - M^H|| / ||M||`` is returned rather than hidden.

    Raises
    ------
    ShapeError
        If ``M`` is not square.
    ContractError
        If the defect exceeds ``hermiticity_tol``.
    """
    m = M.matrix if isinstance(M, OperatorMatrix) else np.asarray(M)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"eigh needs a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    defect = float(np.linalg.norm(m - m.conj().T) / scale) if scale else 0.0
    if defect > hermiticity_tol:
        raise ContractError(f"matrix is not Hermitian: relative defect {defect:.2e}")
    w, v = scipy.linalg.eigh((m + m.conj().T) / 2)
    return EighResult(w, v, defect)


def hermite_values(n_max: int, x) -> np.ndarray:
    """Normalised Hermite functions ``h_0..h_{n_max}`` at points ``x``.

    Uses the stable three-term recurrence; returns shape ``(n_max+1, *x.shape)``.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for j in range(1, n_max):
        out[j + 1] = np.sqrt(2.0 / (j + 1)) * x * out[j] - np.sqrt(j / (j + 1)) * out[j - 1]
    return out


def hermite_oracle(n_max: int, grid: Grid, tail_tol: float = 1e-12) -> list:
    """Hermite functions ``h_0..h_{n_max}`` sampled on a 1D grid.

    Raises
    ------
    DomainError
        If ``|h_{n_max}|`` at the box edge exceeds ``tail_tol``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if grid.dim != 1:
        raise DimensionError("hermite_oracle needs a 1D grid")
    L = grid.half_width[0]
    tail = float(np.abs(hermite_values(n_max, np.array([-L, L]))[n_max]).max())
    if tail > tail_tol:
        raise DomainError(f"h_{n_max} is {tail:.1e} at the edge |x|={L}; enlarge the box")
    vals = hermite_values(n_max, grid.axes()[0])
    return [StateVector(grid, v) for v in vals]


def trig_interp_matrix(grid: Grid, points) -> np.ndarray:
    """Band-limited interpolation matrix from a 1D grid to arbitrary points.

    The periodic trigonometric interpolant of degree ``N/2`` is used, with
    the Nyquist term taken as a cosine so real data stay real.  Returns an
    array of shape ``(len(points), N)``.
    """
    n = grid.points[0]
    dx = grid.spacing[0]
    u = (np.asarray(points, dtype=float) + grid.half_width[0]) / dx
    k = np.fft.fftfreq(n, 1.0 / n)
    E = np.exp(2j * np.pi * np.outer(u, k) / n)
    E[:, n // 2] = np.cos(np.pi * u)
    F = np.exp(-2j * np.pi * np.outer(k, np.arange(n)) / n) / n
    return E @ F


def interpolate(f: StateVector, points, zero_outside: bool = True) -> np.ndarray:
    """Evaluate the band-limited interpolant of a 1D vector at ``points``.

    Points outside ``[-L, L)`` are set to zero unless ``zero_outside`` is
    false, in which case the periodic extension is returned.
    """
    if f.grid.dim != 1:
        raise DimensionError("interpolate expects a 1D vector")
    pts = np.asarray(points, dtype=float)
    out = trig_interp_matrix(f.grid, pts.ravel()) @ f.values
    if zero_outside:
        L = f.grid.half_width[0]
        out[(pts.ravel() < -L) | (pts.ravel() >= L)] = 0.0
    return out.reshape(pts.shape)


def _kron_axis(mat1d: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    mats = [np.eye(n) for n in grid.points]
    mats[axis] = mat1d
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def position_matrix(grid: Grid, axis: int = 0) -> np.ndarray:
    """Diagonal multiplication by ``x_axis``."""
    return _kron_axis(np.diag(grid.axes()[axis]), grid, axis)


def momentum_matrix(grid: Grid, axis: int = 0) -> np.ndarray:
    """Spectral ``-i d/dx_axis``: Hermitian, diagonal in the FFT basis."""
    n = grid.points[axis]
    k = 2 * np.pi * np.fft.fftfreq(n, grid.spacing[axis])
    F = np.fft.fft(np.eye(n), axis=0) / np.sqrt(n)
    p = F.conj().T @ (k[:, None] * F)
    return _kron_axis(p, grid, axis)
