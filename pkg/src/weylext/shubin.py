"""Sampled diagnostics for the Shubin growth and derivative estimates.

A symbol belongs to the class with parameters ``(rho, m0, m1)`` when, for
large ``|z|``, ``C0 |z|^m0 <= |a(z)| <= C1 |z|^m1`` and
``|d^alpha a(z)| <= C_alpha |a(z)| |z|^{-rho |alpha|}``.  These routines
sample both estimates on spheres.  The result is evidence, never a proof.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .symbols import QuadraticSymbol, Symbol

__all__ = [
    "sphere_points",
    "witness_directions",
    "growth_envelope",
    "derivative_ratio",
    "classify",
    "GrowthEnvelope",
    "ShubinReport",
    "R0_DEFAULT",
]

R0_DEFAULT = 5.0
EVIDENCE_NOTE = "sampled evidence on finitely many sphere points; not a proof of class membership"


def sphere_points(dim: int, n_samples: int = 1024, seed: int = 0) -> np.ndarray:
    """Quasi-uniform unit vectors from a scrambled Sobol sequence.

    Points of the sequence are mapped through the normal inverse CDF and
    normalised, which is uniform on the sphere in distribution.
    """
    sob = qmc.Sobol(dim, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(max(n_samples, 2))))
    u = sob.random_base2(m)[:n_samples]
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = ndtri(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def witness_directions(a: Symbol) -> np.ndarray:
    """Analytic extremal directions for quadratic symbols.

    For ``1/2 Mz.z`` the extreme values of ``|a|`` on a sphere are reached
    along eigenvectors of ``M`` for its extreme eigenvalues, including
    every null direction.  Returns an empty array for other symbols.
    """
    if not isinstance(a, QuadraticSymbol):
        return np.zeros((0, a.phase_dim))
    w, V = np.linalg.eigh(a.M)
    tol = 1e-12 * max(1.0, np.abs(w).max())
    idx = set(np.nonzero(np.abs(w) <= tol)[0])
    idx |= {int(np.argmin(np.abs(w))), int(np.argmax(np.abs(w))), 0, len(w) - 1}
    dirs = [V[:, i] for i in sorted(idx)]
    return np.array(dirs + [-d for d in dirs])


def _samples(a: Symbol, n_samples: int, seed: int) -> np.ndarray:
    pts = sphere_points(a.phase_dim, n_samples, seed)
    wit = witness_directions(a)
    return np.vstack([pts, wit]) if len(wit) else pts


@dataclass
class GrowthEnvelope:
    C0_est: float
    C1_est: float
    violations: list
    per_radius: list
    m0: float
    m1: float

    def to_dict(self) -> dict:
        return {"C0_est": self.C0_est, "C1_est": self.C1_est, "violations": self.violations,
                "per_radius": self.per_radius, "m0": self.m0, "m1": self.m1}


def growth_envelope(a: Symbol, m0: float, m1: float, radii, n_samples: int = 1024,
                    seed: int = 0, R0: float = R0_DEFAULT,
                    violation_threshold: float = 1e-8) -> GrowthEnvelope:
    """Estimate the growth constants of ``|a|`` on spheres of the given radii.

    For each radius ``R`` computes ``min |a| / R^m0`` and ``max |a| / R^m1``
    over the sphere samples (plus analytic witness directions for
    quadratic symbols).  A violation is recorded when the lower constant
    falls below ``violation_threshold``.
    """
    radii = [float(r) for r in radii]
    if not radii:
        raise ValueError("radii must be non-empty")
    if any(r < R0 for r in radii):
        raise ValueError(f"all radii must be at least R0 = {R0}")
    if any(b <= a_ for a_, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    dirs = _samples(a, n_samples, seed)
    per = []
    violations = []
    for R in radii:
        vals = np.abs(a(R * dirs))
        lo = float(vals.min() / R ** m0)
        hi = float(vals.max() / R ** m1)
        k = int(np.argmin(vals))
        per.append({"radius": R, "min_abs": float(vals.min()), "max_abs": float(vals.max()),
                    "lower_ratio": lo, "upper_ratio": hi, "argmin": (R * dirs[k]).tolist()})
        if lo < violation_threshold:
            violations.append({"radius": R, "point": (R * dirs[k]).tolist(),
                               "value": float(vals.min())})
    C0 = min(p["lower_ratio"] for p in per)
    C1 = max(p["upper_ratio"] for p in per)
    return GrowthEnvelope(C0, C1, violations, per, m0, m1)


def _multi_indices(dim: int, order: int):
    return [c for c in itertools.combinations_with_replacement(range(dim), order)]


def _fd_derivative(a: Symbol, pts: np.ndarray, alpha: tuple, h: float) -> np.ndarray:
    dim = pts.shape[1]
    e = np.eye(dim) * h
    if len(alpha) == 1:
        (i,) = alpha
        return (a(pts + e[i]) - a(pts - e[i])) / (2 * h)
    i, j = alpha
    if i == j:
        return (a(pts + e[i]) - 2 * a(pts) + a(pts - e[i])) / h ** 2
    return (a(pts + e[i] + e[j]) - a(pts + e[i] - e[j])
            - a(pts - e[i] + e[j]) + a(pts - e[i] - e[j])) / (4 * h ** 2)


def derivative_ratio(a: Symbol, rho: float, radii, max_order: int = 2, n_samples: int = 1024,
                     seed: int = 0, h_rel: float = 1e-4, zero_tol: float = 1e-12) -> dict:
    """Worst ``|d^alpha a| R^{rho |alpha|} / |a|`` per derivative order.

    Derivatives are central finite differences with step ``h_rel * R``.
    The ratio is reported as infinity when ``|a| < zero_tol`` at a sample.
    Returns ``{order: {"worst": value, "per_radius": [...]}}``.
    """
    if max_order > 2:
        raise ValueError("orders above 2 are not supported")
    dirs = _samples(a, n_samples, seed)
    out = {}
    for order in range(1, max_order + 1):
        per = []
        for R in radii:
            pts = R * dirs
            av = np.abs(a(pts))
            worst = 0.0
            for alpha in _multi_indices(a.phase_dim, order):
                d = np.abs(_fd_derivative(a, pts, alpha, h_rel * R))
                with np.errstate(divide="ignore", invalid="ignore"):
                    ratio = np.where(av < zero_tol, np.where(d > zero_tol, np.inf, 0.0),
                                     d * R ** (rho * order) / np.where(av < zero_tol, 1, av))
                worst = max(worst, float(ratio.max()))
            per.append({"radius": float(R), "worst": worst})
        out[order] = {"worst": max(p["worst"] for p in per), "per_radius": per}
    return out


@dataclass
class ShubinReport:
    symbol: str
    params: dict
    growth: GrowthEnvelope
    derivatives: dict
    passes: bool
    witnesses: list = field(default_factory=list)
    note: str = EVIDENCE_NOTE

    @property
    def verdict(self) -> str:
        return "consistent with class" if self.passes else "fails sampled estimates"

    def to_dict(self) -> dict:
        deriv = {str(k): v for k, v in self.derivatives.items()}
        return {"symbol": self.symbol, "params": self.params,
                "per_radius": self.growth.per_radius,
                "growth": {"C0_est": self.growth.C0_est, "C1_est": self.growth.C1_est},
                "derivatives": _json_safe(deriv), "verdict": self.verdict,
                "passes": self.passes, "witnesses": self.witnesses, "note": self.note}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return "inf" if obj > 0 else "-inf"
    return obj


def classify(a: Symbol, rho: float, m0: float, m1: float, radii, n_samples: int = 1024,
             seed: int = 0, derivative_bound: float | None = None, name: str | None = None,
             R0: float = R0_DEFAULT) -> ShubinReport:
    """Aggregate growth and derivative diagnostics into a verdict.

    Passes when no lower-bound violation is found, the upper constant is
    finite, the growth constants are stable across radii and (if given)
    derivative ratios stay below ``derivative_bound``.
    """
    growth = growth_envelope(a, m0, m1, radii, n_samples, seed, R0)
    deriv = derivative_ratio(a, rho, radii, 2, n_samples, seed)
    witnesses = [dict(v, kind="lower bound") for v in growth.violations]
    ok = not growth.violations and np.isfinite(growth.C1_est)
    for order, d in deriv.items():
        if not np.isfinite(d["worst"]):
            ok = False
            witnesses.append({"kind": f"derivative order {order}", "ratio": "inf"})
        elif derivative_bound is not None and d["worst"] > derivative_bound:
            ok = False
            witnesses.append({"kind": f"derivative order {order}", "ratio": d["worst"]})
    params = {"rho": rho, "m0": m0, "m1": m1, "radii": [float(r) for r in radii],
              "n_samples": n_samples, "seed": seed, "R0": R0}
    return ShubinReport(name or getattr(a, "name", "symbol"), params, growth, deriv, bool(ok),
                        witnesses)
