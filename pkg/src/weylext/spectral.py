"""Eigenvalue clustering and spectrum reports."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .grid import OperatorMatrix, eigh

__all__ = ["Cluster", "SpectrumReport", "cluster_eigenvalues", "spectrum_report", "match_levels"]


@dataclass(frozen=True)
class Cluster:
    value: float
    multiplicity: int
    spread: float
    max_residual: float = float("nan")

    def to_dict(self) -> dict:
        return {"value": self.value, "multiplicity": self.multiplicity, "spread": self.spread,
                "max_residual": self.max_residual}


def cluster_eigenvalues(w, gap: float = 1e-3, min_multiplicity: int = 1,
                        residuals=None) -> list:
    """Group sorted eigenvalues whose consecutive gaps are at most ``gap``.

    Clusters with fewer than ``min_multiplicity`` members are dropped; the
    cluster value is the median of its members.
    """
    w = np.asarray(w, dtype=float)
    order = np.argsort(w)
    w = w[order]
    res = None if residuals is None else np.asarray(residuals)[order]
    out = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > gap:
            if i - start >= min_multiplicity:
                members = w[start:i]
                r = float(res[start:i].max()) if res is not None else float("nan")
                out.append(Cluster(float(np.median(members)), i - start,
                                   float(members[-1] - members[0]), r))
            start = i
    return out


@dataclass
class SpectrumReport:
    """Clustered spectrum of an operator.

    ``route`` records how the operator was built (``direct``,
    ``intertwined``, ``tensor``).  ``tolerances`` lists the parameters
    used to produce the clusters.
    """

    clusters: list
    route: str
    tolerances: dict = field(default_factory=dict)
    cutoff: float | None = None

    @property
    def values(self) -> np.ndarray:
        return np.array([c.value for c in self.clusters])

    @property
    def multiplicities(self) -> list:
        return [c.multiplicity for c in self.clusters]

    def to_dict(self) -> dict:
        return {"route": self.route, "cutoff": self.cutoff, "tolerances": dict(self.tolerances),
                "clusters": [c.to_dict() for c in self.clusters]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["index", "value", "multiplicity", "spread", "max_residual"])
        for i, c in enumerate(self.clusters):
            wr.writerow([i, repr(c.value), c.multiplicity, repr(c.spread), repr(c.max_residual)])
        return buf.getvalue()


def spectrum_report(M, route: str, gap: float = 1e-3, min_multiplicity: int = 1,
                    cutoff_fraction: float | None = 0.5, basis=None,
                    residuals: bool = True) -> SpectrumReport:
    """Eigen-decompose ``M`` and cluster its spectrum.

    Parameters
    ----------
    basis : array, optional
        Orthonormal columns; the spectrum of ``basis^H M basis`` is used.
    cutoff_fraction : float or None
        Eigenvalues above ``cutoff_fraction * max eigenvalue`` are discarded
        as discretisation-polluted.
    """
    m = M.matrix if isinstance(M, OperatorMatrix) else np.asarray(M)
    m = (m + m.conj().T) / 2
    if basis is not None:
        m = basis.conj().T @ m @ basis
    res = eigh(m, hermiticity_tol=1e-6)
    w, V = res.values, res.vectors
    cutoff = None
    if cutoff_fraction is not None and len(w):
        cutoff = float(cutoff_fraction * w.max())
        keep = w <= cutoff
        w, V = w[keep], V[:, keep]
    r = None
    if residuals and len(w):
        r = np.linalg.norm(m @ V - V * w, axis=0)
    clusters = cluster_eigenvalues(w, gap, min_multiplicity, r)
    tol = {"gap": gap, "min_multiplicity": min_multiplicity, "cutoff_fraction": cutoff_fraction}
    return SpectrumReport(clusters, route, tol, cutoff)


def match_levels(report: SpectrumReport, levels, tol: float) -> list:
    """Pair each target level with the nearest cluster; returns dicts."""
    out = []
    vals = report.values
    for lev in levels:
        if len(vals) == 0:
            out.append({"target": lev, "value": None, "error": None, "multiplicity": 0, "ok": False})
            continue
        i = int(np.argmin(np.abs(vals - lev)))
        err = float(abs(vals[i] - lev))
        out.append({"target": lev, "value": float(vals[i]), "error": err,
                    "multiplicity": report.clusters[i].multiplicity, "ok": err <= tol})
    return out
