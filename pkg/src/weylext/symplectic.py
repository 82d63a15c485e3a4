"""Symplectic matrices and their free generating quadratic forms.

Coordinates are ordered positions first, then momenta: ``(x; xi)``, and for
extended spaces ``(x, y; xi, eta)``.  The standard form is
``J = [[0, I], [-I, 0]]`` so ``s`` is symplectic iff ``s.T @ J @ s == J``.

A free symplectic matrix ``s = [[A, B], [C, D]]`` (``det B != 0``) is
generated by

    W(x, x') = 1/2 Px.x - Lx.x' + 1/2 Qx'.x'

through ``xi = dW/dx``, ``xi' = -dW/dx'`` with ``(x, xi) = s(x', xi')``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NotFreeError, ShapeError

__all__ = [
    "J",
    "SymplecticMatrix",
    "QuadraticFormW",
    "is_symplectic",
    "w_from_symplectic",
    "symplectic_from_w",
    "w_dual",
    "embed_direct_sum",
    "symplectic_inverse",
    "landau_matrix",
    "bopp_matrix",
    "random_free_symplectic",
]


def J(m: int) -> np.ndarray:
    """Standard symplectic form on ``R^{2m}``."""
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, eye], [-eye, zero]])


def _check_even_square(S):
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise ShapeError(f"expected an even-sized square matrix, got shape {S.shape}")
    return S


def is_symplectic(S, tol: float = 1e-10) -> bool:
    """True iff ``max|S^T J S - J| <= tol``."""
    S = _check_even_square(S)
    m = S.shape[0] // 2
    return bool(np.abs(S.T @ J(m) @ S - J(m)).max() <= tol)


def symplectic_inverse(S) -> np.ndarray:
    """``S^{-1} = -J S^T J`` (exact for symplectic ``S``)."""
    S = _check_even_square(S)
    m = S.shape[0] // 2
    return -J(m) @ S.T @ J(m)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Validated element of ``Sp(2m, R)``."""

    S: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        S = _check_even_square(self.S).copy()
        if not is_symplectic(S, self.tol):
            dev = np.abs(S.T @ J(S.shape[0] // 2) @ S - J(S.shape[0] // 2)).max()
            raise ValueError(f"matrix is not symplectic (defect {dev:.2e})")
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @property
    def half_dim(self) -> int:
        return self.S.shape[0] // 2

    @property
    def blocks(self) -> tuple:
        m = self.half_dim
        S = self.S
        return S[:m, :m], S[:m, m:], S[m:, :m], S[m:, m:]

    def inverse(self) -> "SymplecticMatrix":
        return SymplecticMatrix(symplectic_inverse(self.S), self.tol)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.S @ other.S, max(self.tol, other.tol))

    def is_free(self, tol: float = 1e-10) -> bool:
        B = self.blocks[1]
        return abs(np.linalg.det(B)) > tol * np.linalg.norm(self.S, 2) ** self.half_dim

    def is_identity(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self.S - np.eye(self.S.shape[0])).max() <= tol)

    def to_dict(self) -> dict:
        return {"half_dim": self.half_dim, "rows": self.S.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "SymplecticMatrix":
        S = np.asarray(data["rows"], dtype=float)
        if "half_dim" in data and S.shape[0] != 2 * int(data["half_dim"]):
            raise ShapeError("half_dim does not match the number of rows")
        return cls(S)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SymplecticMatrix":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class QuadraticFormW:
    """Free generating function ``W`` with its Maslov index.

    ``W(x, x') = 1/2 Px.x - Lx.x' + 1/2 Qx'.x'`` on ``R^n x R^n``.
    """

    P: np.ndarray
    L: np.ndarray
    Q: np.ndarray
    maslov: int = 0

    def __post_init__(self):
        P, L, Q = (np.atleast_2d(np.asarray(a, dtype=float)).copy() for a in (self.P, self.L, self.Q))
        n = L.shape[0]
        if any(a.shape != (n, n) for a in (P, L, Q)):
            raise ShapeError("P, L, Q must be square of equal size")
        if np.abs(P - P.T).max() > 1e-12 or np.abs(Q - Q.T).max() > 1e-12:
            raise ValueError("P and Q must be symmetric")
        if abs(np.linalg.det(L)) <= 1e-10:
            raise NotFreeError("det L vanishes; the form generates no symplectic map")
        for a in (P, L, Q):
            a.setflags(write=False)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "maslov", int(self.maslov))

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def __call__(self, x, xp) -> np.ndarray:
        """Evaluate ``W`` at points ``x`` and ``x'`` (last axis of length n)."""
        x = np.asarray(x, dtype=float)
        xp = np.asarray(xp, dtype=float)
        return (0.5 * np.einsum("...a,ab,...b->...", x, self.P, x)
                - np.einsum("...a,ab,...b->...", x, self.L.T, xp)
                + 0.5 * np.einsum("...a,ab,...b->...", xp, self.Q, xp))

    def prefactor(self) -> complex:
        """``(1/(2 pi i))^{n/2} * i^m * sqrt|det L|``."""
        n = self.n
        return complex((1 / (2j * np.pi)) ** (n / 2) * 1j ** self.maslov
                       * np.sqrt(abs(np.linalg.det(self.L))))

    def to_dict(self) -> dict:
        return {"P": self.P.tolist(), "L": self.L.tolist(), "Q": self.Q.tolist(),
                "maslov": self.maslov}

    @classmethod
    def from_dict(cls, data: dict) -> "QuadraticFormW":
        return cls(data["P"], data["L"], data["Q"], data.get("maslov", 0))


def w_from_symplectic(s, maslov: int = 0, tol: float = 1e-10) -> QuadraticFormW:
    """Generating form of a free symplectic matrix.

    ``P = D B^{-1}``, ``L = B^{-1}``, ``Q = B^{-1} A``.

    Raises
    ------
    NotFreeError
        If ``|det B| <= tol * ||s||^m``.
    """
    s = s if isinstance(s, SymplecticMatrix) else SymplecticMatrix(s)
    if not s.is_free(tol):
        raise NotFreeError("upper-right block is singular; no generating form exists")
    A, B, _, D = s.blocks
    Bi = np.linalg.inv(B)
    P = D @ Bi
    Q = Bi @ A
    return QuadraticFormW((P + P.T) / 2, Bi, (Q + Q.T) / 2, maslov)


def symplectic_from_w(W: QuadraticFormW) -> np.ndarray:
    """Symplectic matrix generated by ``W`` (inverse of :func:`w_from_symplectic`)."""
    B = np.linalg.inv(W.L)
    A = B @ W.Q
    D = W.P @ B
    C = D @ W.Q - W.L.T
    return np.block([[A, B], [C, D]])


def w_dual(W: QuadraticFormW) -> QuadraticFormW:
    """Form ``W*(x, x') = -W(x', x)`` with Maslov index ``n - m``.

    The operator built from ``W*`` inverts the one built from ``W``; its
    data are ``(-Q, -L^T, -P, n - m)``.
    """
    return QuadraticFormW(-W.Q, -W.L.T, -W.P, W.n - W.maslov)


def embed_direct_sum(s_n, s_k) -> SymplecticMatrix:
    """``s_n`` on ``(x, xi)`` and ``s_k`` on ``(y, eta)``, in ``(x, y; xi, eta)`` order."""
    a = s_n.S if isinstance(s_n, SymplecticMatrix) else np.asarray(s_n, dtype=float)
    b = s_k.S if isinstance(s_k, SymplecticMatrix) else np.asarray(s_k, dtype=float)
    n, k = a.shape[0] // 2, b.shape[0] // 2
    m = n + k
    out = np.zeros((2 * m, 2 * m))
    ix = np.r_[0:n, m:m + n]
    iy = np.r_[n:m, m + n:2 * m]
    out[np.ix_(ix, ix)] = a
    out[np.ix_(iy, iy)] = b
    return SymplecticMatrix(out)


def _swap(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]])


def landau_matrix() -> SymplecticMatrix:
    """Symplectic map of ``R^4`` turning ``x^2 + xi^2`` into the Landau symbol."""
    D = _swap(1)
    eye = np.eye(2)
    return SymplecticMatrix(np.block([[0.5 * eye, -D], [0.5 * D, eye]]))


def bopp_matrix(n: int = 1) -> SymplecticMatrix:
    """Symplectic map of ``R^{4n}`` giving ``a(x - eta/2, y + xi/2)``."""
    D = _swap(n)
    eye = np.eye(2 * n)
    return SymplecticMatrix(np.block([[eye, -0.5 * D], [D, 0.5 * eye]]))


def random_free_symplectic(rng: np.random.Generator, m: int = 1, strength: float = 0.3,
                           min_det_b: float = 0.2) -> SymplecticMatrix:
    """Random mildly distorted free element of ``Sp(2m)``.

    Product of a partial rotation, a diagonal squeeze and a symmetric
    shear; redrawn until ``|det B|`` exceeds ``min_det_b``.
    """
    for _ in range(1000):
        theta = rng.uniform(np.pi / 6, np.pi / 3, size=m)
        c, s = np.diag(np.cos(theta)), np.diag(np.sin(theta))
        rot = np.block([[c, s], [-s, c]])
        r = np.diag(np.exp(rng.uniform(-strength, strength, size=m)))
        squeeze = np.block([[r, np.zeros((m, m))], [np.zeros((m, m)), np.linalg.inv(r)]])
        sym = rng.uniform(-strength, strength, size=(m, m))
        sym = (sym + sym.T) / 2
        shear = np.block([[np.eye(m), np.zeros((m, m))], [sym, np.eye(m)]])
        S = rot @ squeeze @ shear
        if abs(np.linalg.det(S[:m, m:])) > min_det_b:
            return SymplecticMatrix(S)
    raise RuntimeError("failed to draw a free symplectic matrix")
