"""Intertwiners between an operator and its extension, and diagnostics built on them.

For a window ``chi`` on the added variables the intertwiner is
``T psi = S^{-1}(psi (x) chi)``.  It satisfies ``A~ T = T A``, maps
eigenvectors of ``A`` to eigenvectors of ``A~`` with the same eigenvalue
and, for normalised ``chi``, is an isometry.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DimensionError, PreconditionError, UnsupportedError
from .extension import Extension, ExtensionSpec
from .grid import Grid, OperatorMatrix, StateVector, dft, eigh, norm, weighted_inner
from .wigner import cross_wigner_at

__all__ = [
    "Intertwiner",
    "build_intertwiner",
    "gram_check",
    "gram_matrix",
    "TransferredPair",
    "transfer_eigenpairs",
    "landau_intertwiner_closed",
    "bopp_intertwiner_closed",
    "unitary_fourier",
    "KernelProbe",
    "kernel_probe",
    "WitnessReport",
    "nonhypoellipticity_witness",
    "plane_wave",
    "outer_mass_ratio",
    "pull_back",
]


def _ext(spec, x_grid, ext):
    if ext is not None:
        return ext
    if x_grid is None:
        raise DimensionError("either ext or x_grid is required")
    return Extension(spec, x_grid)


@dataclass(eq=False)
class Intertwiner:
    """``T psi = S^{-1}(psi (x) chi)`` as a matrix from the x grid to the product grid."""

    ext: Extension
    chi: StateVector
    matrix: OperatorMatrix

    @property
    def spec(self) -> ExtensionSpec:
        return self.ext.spec

    def apply(self, psi: StateVector) -> StateVector:
        return self.matrix.apply(psi)

    def adjoint_apply(self, Phi: StateVector) -> StateVector:
        """``T* Phi(x) = sum_y conj(chi(y)) (S Phi)(x, y) dy``."""
        SPhi = self.ext.s_op.apply(Phi).values.reshape(self.ext.x_grid.size, self.ext.y_grid.size)
        vals = SPhi @ self.chi.values.conj() * self.ext.y_grid.cell
        return StateVector(self.ext.x_grid, vals)

    def adjoint(self) -> OperatorMatrix:
        """Matrix of ``T*`` built from ``S`` (not from ``T^H``)."""
        S = self.ext.s_op.matrix.reshape(self.ext.x_grid.size, self.ext.y_grid.size, -1)
        mat = np.einsum("y,xyj->xj", self.chi.values.conj(), S) * self.ext.y_grid.cell
        return OperatorMatrix(self.ext.grid, self.ext.x_grid, mat)


def build_intertwiner(spec: ExtensionSpec, chi: StateVector, x_grid: Grid | None = None,
                      ext: Extension | None = None) -> Intertwiner:
    """Intertwiner for window ``chi``.

    Raises
    ------
    DegenerateError
        If ``chi`` is the zero vector.
    """
    ext = _ext(spec, x_grid, ext)
    if not chi.grid.is_close(ext.y_grid):
        raise DimensionError("chi must live on the extension y grid")
    if not np.any(chi.values):
        raise DegenerateError("the window chi is zero")
    emb = np.kron(np.eye(ext.x_grid.size), chi.values[:, None])
    mat = ext.s_inv_op.matrix @ emb
    return Intertwiner(ext, chi, OperatorMatrix(ext.x_grid, ext.grid, mat))


def gram_matrix(spec: ExtensionSpec, phis, chis, x_grid: Grid | None = None,
                ext: Extension | None = None) -> np.ndarray:
    """Gram matrix of ``{T_{chi_l} phi_j}`` ordered ``(j, l)`` with ``l`` fastest."""
    ext = _ext(spec, x_grid, ext)
    cols = [ext.state(phi, chi).values for phi in phis for chi in chis]
    V = np.stack(cols, axis=1)
    return V.conj().T @ V * ext.grid.cell


def gram_check(spec: ExtensionSpec, phis, chis, x_grid: Grid | None = None,
               ext: Extension | None = None) -> float:
    """``max |Gram - I|`` for the family ``T_{chi_l} phi_j``."""
    G = gram_matrix(spec, phis, chis, x_grid, ext)
    return float(np.abs(G - np.eye(G.shape[0])).max())


@dataclass(eq=False)
class TransferredPair:
    j: int
    l: int
    value: float
    vector: StateVector
    residual: float

    def to_dict(self) -> dict:
        return {"j": self.j, "l": self.l, "value": self.value, "residual": self.residual}


def transfer_eigenpairs(pairs, spec: ExtensionSpec, chis, A_tilde: OperatorMatrix | None = None,
                        A: OperatorMatrix | None = None, x_grid: Grid | None = None,
                        ext: Extension | None = None) -> list:
    """Carry eigenpairs ``(lambda_j, phi_j)`` of ``A`` to ``A~``.

    Returns one :class:`TransferredPair` per ``(j, l)`` with
    ``Phi_jl = T_{chi_l} phi_j`` and the relative residual
    ``||A~ Phi - lambda Phi|| / (|lambda| ||Phi||)`` (absolute when
    ``lambda == 0``).  ``A~`` is built from ``A`` if not given.
    """
    ext = _ext(spec, x_grid, ext)
    if A_tilde is None:
        if A is None:
            raise ValueError("either A_tilde or A is required")
        A_tilde = ext.extend(A)
    out = []
    for j, (lam, phi) in enumerate(pairs):
        for l, chi in enumerate(chis):
            Phi = ext.state(phi, chi)
            r = A_tilde.apply(Phi) - lam * Phi
            scale = abs(lam) * norm(Phi) if lam else norm(Phi)
            out.append(TransferredPair(j, l, float(lam), Phi, float(norm(r) / scale)))
    return out


def pull_back(Psi: StateVector, chis, ext: Extension, tol: float = 1e-8) -> tuple:
    """Scan windows for the first ``l`` with ``T_{chi_l}^* Psi`` not negligible.

    Returns ``(l, T_{chi_l}^* Psi)``; when ``Psi`` is an eigenvector of the
    extended operator, the pulled-back vector is one of the base operator
    for the same eigenvalue.  ``l`` is ``None`` if every projection has
    norm below ``tol * ||Psi||``.
    """
    scale = norm(Psi)
    for l, chi in enumerate(chis):
        T = Intertwiner(ext, chi, None)
        phi = T.adjoint_apply(Psi)
        if norm(phi) > tol * scale:
            return l, phi
    return None, None


def unitary_fourier(chi: StateVector) -> StateVector:
    """``chi^(xi) = (2 pi)^{-n/2} int exp(-i x.xi) chi(x) dx`` on the dual grid."""
    out = dft(chi, +1)
    return StateVector(out.grid, out.values / (2 * np.pi) ** (chi.grid.dim / 2))


def _closed_form_check(phi, chi):
    if phi.grid.dim != 1 or chi.grid.dim != 1:
        raise UnsupportedError("closed-form intertwiners are implemented for n = k = 1")


def landau_intertwiner_closed(phi: StateVector, chi: StateVector) -> StateVector:
    """Closed-form Landau intertwiner ``-i sqrt(pi/2) W(phi, conj chi^)(x/2, y/2)``.

    The output lives on ``phi.grid x chi.grid``.
    """
    _closed_form_check(phi, chi)
    ref = unitary_fourier(chi).conj()
    x = phi.grid.axes()[0]
    y = chi.grid.axes()[0]
    vals = -1j * np.sqrt(np.pi / 2) * cross_wigner_at(phi, ref, x / 2, y / 2)
    return StateVector(phi.grid.product(chi.grid), vals)


def bopp_intertwiner_closed(phi: StateVector, chi: StateVector) -> StateVector:
    """Closed-form Bopp intertwiner ``(2 pi)^{n/2} i^{-n} W(phi, conj chi^)(x, y)``."""
    _closed_form_check(phi, chi)
    ref = unitary_fourier(chi).conj()
    x = phi.grid.axes()[0]
    y = chi.grid.axes()[0]
    vals = np.sqrt(2 * np.pi) * (-1j) * cross_wigner_at(phi, ref, x, y)
    return StateVector(phi.grid.product(chi.grid), vals)


@dataclass(frozen=True)
class KernelProbe:
    sigma_min: float
    sigma_min_extended: float
    threshold: float
    threshold_extended: float

    @property
    def has_kernel(self) -> bool:
        return self.sigma_min <= self.threshold

    @property
    def extended_has_kernel(self) -> bool:
        return self.sigma_min_extended <= self.threshold_extended

    @property
    def consistent(self) -> bool:
        return self.has_kernel == self.extended_has_kernel

    def to_dict(self) -> dict:
        return {"sigma_min": self.sigma_min, "sigma_min_extended": self.sigma_min_extended,
                "threshold": self.threshold, "threshold_extended": self.threshold_extended,
                "has_kernel": self.has_kernel, "extended_has_kernel": self.extended_has_kernel,
                "consistent": self.consistent}


def _sigma_min_hermitian(m: np.ndarray) -> tuple:
    h = (m + m.conj().T) / 2
    w = eigh(h, hermiticity_tol=np.inf).values
    return float(np.abs(w).min()), float(np.abs(w).max())


def kernel_probe(A: OperatorMatrix, A_tilde: OperatorMatrix, rel_threshold: float = 1e-6,
                 basis=None) -> KernelProbe:
    """Smallest singular values of ``A`` and ``A~`` after Hermitisation.

    A kernel is flagged when ``sigma_min <= rel_threshold * ||M||_2``.  With
    ``basis`` (orthonormal columns) ``A~`` is compressed to that subspace first.
    """
    sa, na = _sigma_min_hermitian(A.matrix)
    m = A_tilde.matrix
    if basis is not None:
        m = basis.conj().T @ m @ basis
    st, nt = _sigma_min_hermitian(m)
    return KernelProbe(sa, st, rel_threshold * na, rel_threshold * nt)


def plane_wave(grid: Grid, index: int = 0) -> StateVector:
    """Unit-modulus wave ``exp(i kappa.y)`` with ``kappa`` an ``index``-th dual frequency.

    ``kappa = index * dxi`` on each axis, so the wave is periodic on the box.
    """
    mesh = np.meshgrid(*grid.axes(), indexing="ij")
    phase = sum(index * d * m for d, m in zip(grid.dual().spacing, mesh))
    return StateVector(grid, np.exp(1j * phase))


def outer_mass_ratio(Phi: StateVector, fraction: float = 0.25) -> float:
    """Share of ``|Phi|^2`` where some coordinate has ``|x_a| > (1 - fraction) L_a``."""
    grid = Phi.grid
    mesh = np.meshgrid(*grid.axes(), indexing="ij")
    outer = np.zeros(grid.shape, dtype=bool)
    for m, L in zip(mesh, grid.half_width):
        outer |= np.abs(m) > (1 - fraction) * L
    mass = np.abs(Phi.as_array()) ** 2
    total = mass.sum()
    return float(mass[outer].sum() / total) if total else 0.0


@dataclass(frozen=True)
class WitnessReport:
    residual: float
    outer_mass: float
    sigma_min: float
    kernel_eigenvalue: float
    residual_tolerance: float
    outer_mass_min: float

    @property
    def success(self) -> bool:
        return self.residual <= self.residual_tolerance and self.outer_mass >= self.outer_mass_min

    def to_dict(self) -> dict:
        return {"residual": self.residual, "outer_mass": self.outer_mass,
                "sigma_min": self.sigma_min, "kernel_eigenvalue": self.kernel_eigenvalue,
                "residual_tolerance": self.residual_tolerance,
                "outer_mass_min": self.outer_mass_min, "success": self.success}


def nonhypoellipticity_witness(A: OperatorMatrix, spec: ExtensionSpec, chi_profile: StateVector,
                               x_grid: Grid | None = None, ext: Extension | None = None,
                               A_tilde: OperatorMatrix | None = None,
                               kernel_threshold: float = 1e-6, residual_tolerance: float = 1e-5,
                               outer_mass_min: float = 0.1) -> WitnessReport:
    """Build ``Phi = T_chi phi`` from a kernel vector ``phi`` of ``A``.

    Reports ``r = ||A~ Phi|| / ||Phi||`` and the outer-mass ratio of
    ``Phi``; a non-decaying ``chi`` gives a non-decaying solution of
    ``A~ Phi = 0``.

    Raises
    ------
    PreconditionError
        If ``A`` has no eigenvalue below ``kernel_threshold * ||A||``.
    """
    ext = _ext(spec, x_grid if x_grid is not None else A.in_grid, ext)
    res = eigh(A.matrix, hermiticity_tol=1e-6)
    i = int(np.argmin(np.abs(res.values)))
    sigma = float(abs(res.values[i]))
    if sigma > kernel_threshold * np.abs(res.values).max():
        raise PreconditionError(f"A has no numerical kernel (sigma_min = {sigma:.2e})")
    phi = StateVector(ext.x_grid, res.vectors[:, i] / np.sqrt(ext.x_grid.cell))
    A_tilde = ext.extend(A) if A_tilde is None else A_tilde
    Phi = ext.state(phi, chi_profile)
    r = norm(A_tilde.apply(Phi)) / norm(Phi)
    return WitnessReport(float(r), outer_mass_ratio(Phi), sigma, float(res.values[i]),
                         residual_tolerance, outer_mass_min)
