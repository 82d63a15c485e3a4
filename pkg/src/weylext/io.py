"""Serialisation helpers: JSON reports, CSV tables and binary matrix dumps."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .grid import Grid, OperatorMatrix
from .weyl import SampledSymbol

__all__ = ["to_jsonable", "dumps", "write_json", "write_text", "csv_table",
           "export_matrix", "load_matrix", "wigner_csv"]


def to_jsonable(obj):
    """Convert numpy scalars/arrays, complex numbers and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if np.isnan(val):
            return "nan"
        if np.isinf(val):
            return "inf" if val > 0 else "-inf"
        return val
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def write_json(path, obj) -> Path:
    return write_text(path, dumps(obj))


def csv_table(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def export_matrix(path, M: OperatorMatrix, ordering: str = "x-major, y-minor") -> tuple:
    """Write entries as raw column-major complex128 plus a JSON sidecar.

    Returns the paths ``(data, sidecar)``; the sidecar is ``<path>.json``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.asfortranarray(M.matrix.astype(np.complex128)).ravel(order="F").tofile(path)
    side = {"shape": list(M.matrix.shape), "dtype": "complex128", "order": "column-major",
            "in_grid": M.in_grid.to_dict(), "out_grid": M.out_grid.to_dict(),
            "node_ordering": ordering, "quadrature_absorbed": True}
    side_path = path.with_name(path.name + ".json")
    write_json(side_path, side)
    return path, side_path


def load_matrix(path) -> OperatorMatrix:
    path = Path(path)
    side = json.loads(path.with_name(path.name + ".json").read_text())
    shape = tuple(side["shape"])
    data = np.fromfile(path, dtype=np.complex128).reshape(shape, order="F")
    return OperatorMatrix(Grid.from_dict(side["in_grid"]), Grid.from_dict(side["out_grid"]), data)


def wigner_csv(W: SampledSymbol) -> str:
    """Rows ``(x..., xi..., re, im)`` over the phase grid."""
    n = W.grid.dim
    pts = W.phase_grid.nodes()
    vals = W.values.ravel()
    names = (["x"] if n == 1 else [f"x{i + 1}" for i in range(n)])
    names += (["xi"] if n == 1 else [f"xi{i + 1}" for i in range(n)])
    rows = (list(p) + [v.real, v.imag] for p, v in zip(pts, vals))
    return csv_table(names + ["re", "im"], rows)
