"""Symplectic dimensional extensions of symbols and operators.

An extension of ``R^{2n}`` to ``R^{2(n+k)}`` is fixed by ``s`` in
``Sp(2(n+k))``, coordinates ``(x, y; xi, eta)``.  On symbols it maps ``a`` to
``a~(z) = a(x'(z), xi'(z))`` with ``(x', y'; xi', eta') = s z``.  On operators
it maps ``A`` to ``S^{-1} (A (x) I) S`` where ``S`` is a metaplectic operator
projecting onto ``s``.

The stored generating form is the one of ``s^{-1}``: its operator is the
one applied to ``psi (x) chi`` by intertwiners.  The conjugating operator
is built from the dual form, so both come from one set of data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, NotFreeError, UnsupportedError
from .grid import Grid, OperatorMatrix, StateVector
from .metaplectic import build_metaplectic
from .symbols import Symbol
from .symplectic import (QuadraticFormW, SymplecticMatrix, bopp_matrix, landau_matrix,
                         symplectic_from_w, w_dual, w_from_symplectic)

__all__ = [
    "ExtensionSpec",
    "Extension",
    "extend_symbol",
    "extend_operator_tensor",
    "extend_operator",
    "weak_form_eval",
    "identity_spec",
    "landau_spec",
    "bopp_spec",
    "matched_scale",
    "matched_grid",
]


@dataclass(frozen=True, eq=False)
class ExtensionSpec:
    """Data of an extension map.

    Parameters
    ----------
    n, k : int
        Base and added dimensions.
    s : SymplecticMatrix
        Element of ``Sp(2(n+k))`` in ``(x, y; xi, eta)`` order.
    maslov : int
        Maslov index of the generating form of ``s^{-1}``.
    factors : tuple of QuadraticFormW, optional
        For non-free ``s``: forms whose operators multiply (left to right)
        to the operator of ``s^{-1}``.
    oversample : int
        Quadrature oversampling passed to :func:`build_metaplectic`.
    """

    n: int
    k: int
    s: SymplecticMatrix
    maslov: int = 0
    factors: tuple | None = None
    oversample: int = 1
    name: str = "custom"

    def __post_init__(self):
        if not isinstance(self.s, SymplecticMatrix):
            object.__setattr__(self, "s", SymplecticMatrix(self.s))
        if self.s.half_dim != self.n + self.k:
            raise DimensionError(f"s acts on R^{2 * self.s.half_dim}, expected R^{2 * (self.n + self.k)}")
        if self.factors is not None:
            facs = tuple(self.factors)
            prod = np.eye(2 * (self.n + self.k))
            for W in facs:
                prod = prod @ symplectic_from_w(W)
            if np.abs(prod - self.s.inverse().S).max() > 1e-8:
                raise ValueError("supplied factors do not project onto s^-1")
            object.__setattr__(self, "factors", facs)

    @property
    def route(self) -> str:
        if self.s.is_identity():
            return "identity"
        if self.s.is_free():
            return "free"
        if self.factors:
            return "factors"
        return "unsupported"

    @property
    def form(self) -> QuadraticFormW:
        """Generating form of ``s^{-1}`` with the stored Maslov index."""
        return w_from_symplectic(self.s.inverse(), maslov=self.maslov)

    def symbol_rows(self) -> np.ndarray:
        """Rows of ``s`` giving ``(x', xi')``; ``a~(z) = a(R z)``."""
        n, k = self.n, self.k
        rows = np.r_[0:n, n + k:2 * n + k]
        return self.s.S[rows]

    def to_dict(self) -> dict:
        out = {"n": self.n, "k": self.k, "s": self.s.to_dict(), "maslov": self.maslov,
               "name": self.name}
        if self.oversample != 1:
            out["oversample"] = self.oversample
        if self.factors:
            out["factors"] = [W.to_dict() for W in self.factors]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExtensionSpec":
        s = data["s"]
        s = SymplecticMatrix.from_dict(s) if isinstance(s, dict) else SymplecticMatrix(s)
        facs = data.get("factors")
        facs = tuple(QuadraticFormW.from_dict(f) for f in facs) if facs else None
        return cls(int(data["n"]), int(data["k"]), s, int(data.get("maslov", 0)), facs,
                   int(data.get("oversample", 1)), data.get("name", "custom"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExtensionSpec":
        return cls.from_dict(json.loads(text))


def identity_spec(n: int = 1, k: int = 1) -> ExtensionSpec:
    return ExtensionSpec(n, k, SymplecticMatrix(np.eye(2 * (n + k))), name="identity")


def landau_spec() -> ExtensionSpec:
    """``R^2 -> R^4`` extension turning ``x^2 + xi^2`` into the Landau symbol."""
    return ExtensionSpec(1, 1, landau_matrix(), name="landau")


def bopp_spec(n: int = 1) -> ExtensionSpec:
    """``R^{2n} -> R^{4n}`` extension producing Bopp operators."""
    return ExtensionSpec(n, n, bopp_matrix(n), name="bopp")


def matched_scale(spec: ExtensionSpec) -> float:
    """Scale ``c`` such that ``L = c * (permutation)`` for the stored form.

    Raises ``UnsupportedError`` when ``L`` is not a scaled permutation.
    """
    if spec.route == "identity":
        return 1.0
    L = spec.form.L
    nz = np.abs(L) > 1e-12
    vals = np.abs(L[nz])
    if not (nz.sum(axis=0) == 1).all() or not (nz.sum(axis=1) == 1).all() \
            or np.ptp(vals) > 1e-12 * vals.max():
        raise UnsupportedError("no matched grid: L is not a scaled permutation")
    return float(vals[0])


def matched_grid(spec: ExtensionSpec, points: int) -> Grid:
    """Base grid on which the extension operators are exactly unitary.

    Uses ``Grid.matched`` with the scale of the cross term; the same grid
    serves as the y grid.
    """
    return Grid.matched(spec.n, points, matched_scale(spec))


def extend_symbol(a: Symbol, spec: ExtensionSpec) -> Symbol:
    """``a~ = (a (x) 1) o s`` as a closed-form symbol on ``R^{2(n+k)}``."""
    if a.phase_dim != 2 * spec.n:
        raise DimensionError(f"symbol on R^{a.phase_dim} does not match n={spec.n}")
    return a.compose(spec.symbol_rows())


def extend_operator_tensor(A: OperatorMatrix, y_grid: Grid) -> OperatorMatrix:
    """``A (x) I`` on the product grid (x-major, y-minor)."""
    grid = A.in_grid.product(y_grid)
    out = A.out_grid.product(y_grid)
    return OperatorMatrix(grid, out, np.kron(A.matrix, np.eye(y_grid.size)))


class Extension:
    """An extension spec bound to concrete x and y grids.

    Builds the metaplectic pair once and reuses it for operators,
    intertwiners and states.
    """

    def __init__(self, spec: ExtensionSpec, x_grid: Grid, y_grid: Grid | None = None):
        if x_grid.dim != spec.n:
            raise DimensionError("x grid dimension differs from spec.n")
        y_grid = x_grid if y_grid is None and spec.k == spec.n else y_grid
        if y_grid is None or y_grid.dim != spec.k:
            raise DimensionError("a y grid of dimension spec.k is required")
        self.spec = spec
        self.x_grid = x_grid
        self.y_grid = y_grid
        self.grid = x_grid.product(y_grid)

    @cached_property
    def s_inv_op(self) -> OperatorMatrix:
        """Operator projecting onto ``s^{-1}`` (applied to ``psi (x) chi``)."""
        route = self.spec.route
        if route == "identity":
            return OperatorMatrix.identity(self.grid)
        if route == "free":
            return build_metaplectic(self.spec.form, self.grid, oversample=self.spec.oversample)
        if route == "factors":
            out = OperatorMatrix.identity(self.grid)
            for W in self.spec.factors:
                out = out @ build_metaplectic(W, self.grid, oversample=self.spec.oversample)
            return out
        raise NotFreeError("s is not free and no factors were supplied")

    @cached_property
    def s_op(self) -> OperatorMatrix:
        """Operator projecting onto ``s`` (inverse of :attr:`s_inv_op`)."""
        route = self.spec.route
        if route == "identity":
            return OperatorMatrix.identity(self.grid)
        if route == "free":
            return build_metaplectic(w_dual(self.spec.form), self.grid,
                                     oversample=self.spec.oversample)
        if route == "factors":
            out = OperatorMatrix.identity(self.grid)
            for W in reversed(self.spec.factors):
                out = out @ build_metaplectic(w_dual(W), self.grid, oversample=self.spec.oversample)
            return out
        raise NotFreeError("s is not free and no factors were supplied")

    def tensor(self, A: OperatorMatrix) -> OperatorMatrix:
        if not A.in_grid.is_close(self.x_grid):
            raise DimensionError("operator grid differs from the extension x grid")
        return extend_operator_tensor(A, self.y_grid)

    def extend(self, A: OperatorMatrix) -> OperatorMatrix:
        """``S^{-1} (A (x) I) S``."""
        T = self.tensor(A)
        if self.spec.route == "identity":
            return T
        return self.s_inv_op @ T @ self.s_op

    def state(self, psi: StateVector, chi: StateVector) -> StateVector:
        """``S^{-1}(psi (x) chi)``."""
        return self.s_inv_op.apply(psi.tensor(chi))


def extend_operator(A: OperatorMatrix, spec: ExtensionSpec, y_grid: Grid | None = None,
                    ext: Extension | None = None) -> OperatorMatrix:
    """Extension ``S^{-1} (A (x) I) S`` of an operator matrix.

    Pass ``ext`` to reuse metaplectic matrices across calls.
    """
    if ext is None:
        if spec.route == "unsupported":
            raise UnsupportedError("s is not free and no factors were supplied")
        ext = Extension(spec, A.in_grid, y_grid)
    return ext.extend(A)


def weak_form_eval(a: Symbol, Psi: StateVector, Phi: StateVector, spec: ExtensionSpec) -> complex:
    """Phase-space pairing ``sum a~(z) W(Psi, Phi)(z) dz``.

    Equals ``(A~ Psi | Phi)`` for the extended operator.
    """
    from .weyl import sample_symbol
    from .wigner import cross_wigner

    if Psi.grid.dim != spec.n + spec.k:
        raise DimensionError("states must live on the extended grid")
    wig = cross_wigner(Psi, Phi)
    at = sample_symbol(extend_symbol(a, spec), Psi.grid)
    return complex(np.sum(at.values * wig.values) * wig.cell())
