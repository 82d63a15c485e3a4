"""Scenario pipelines behind the command line.

Each ``run_*`` function takes a config dict (merged over :data:`DEFAULTS`),
a seed and a job count, and returns a :class:`ScenarioResult`.  Nothing
here touches the filesystem; see :mod:`weylext.cli` for output handling.
Reports carry the merged config, library version, grid parameters and the
tolerance of every check, and never include timings, so identical inputs
give byte-identical JSON.
"""
from __future__ import annotations

import copy
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .errors import ConfigError, PreconditionError, WeylExtError
from .extension import (Extension, ExtensionSpec, bopp_spec, extend_symbol, identity_spec,
                        landau_spec, matched_grid)
from .grid import Grid, OperatorMatrix, StateVector, eigh, hermite_oracle, norm
from .intertwine import (bopp_intertwiner_closed, build_intertwiner, gram_check, gram_matrix,
                         kernel_probe, landau_intertwiner_closed, nonhypoellipticity_witness,
                         outer_mass_ratio, plane_wave, pull_back, transfer_eigenpairs)
from .io import csv_table
from .metaplectic import build_metaplectic, inverse_metaplectic, unitarity_defect
from .shubin import classify
from .spectral import match_levels, spectrum_report
from .symbols import GaussianSymbol, QuadraticSymbol, harmonic_oscillator, parse_symbol
from .symplectic import random_free_symplectic, w_from_symplectic
from .weyl import quantize, quantize_quadratic
from .wigner import bopp_operator, bopp_symbol, operator_of

__all__ = ["ScenarioResult", "DEFAULTS", "SCENARIOS", "run", "merge_config"]

_HO = "x**2 + xi**2"

DEFAULTS = {
    "ho-spectrum": {"L": 8.0, "N": 64, "n_eigs": 6, "tolerance": 1e-6},
    "landau": {
        "N": 48, "symbol": _HO, "levels": [1, 3, 5, 7], "level_tolerance": 1e-3,
        "route_tolerance": 1e-3, "min_multiplicity": 4, "cluster_gap": 1e-3,
        "cluster_min_size": 3, "cutoff_fraction": 0.5, "residual_tolerance": 1e-5,
        "j_max": 3, "l_max": 3, "hermite_tail_tol": 1e-6,
    },
    "bopp": {
        "N": 52, "symbol": _HO, "levels": [1, 3, 5, 7], "level_tolerance": 1e-3,
        "route_tolerance": 1e-3, "min_multiplicity": 4, "cluster_gap": 1e-3,
        "cluster_min_size": 3, "cutoff_fraction": 0.5, "residual_tolerance": 1e-5,
        "j_max": 3, "l_max": 3, "hermite_tail_tol": 1e-6,
        "closed_form_tolerance": 1e-6, "closed_form_max": 1,
    },
    "covariance": {
        "L": 8.0, "N": 64, "n_matrices": 5, "symbol": None, "j_max": 4, "tolerance": 1e-5,
        "oversample": 4, "strength": 0.3, "min_det_b": 0.4, "hermite_tail_tol": 1e-9,
    },
    "intertwine-check": {
        "spec": "landau", "N": None, "L": None, "symbol": _HO, "j_max": 3, "l_max": 3,
        "gram_tolerance": 1e-6, "residual_tolerance": 1e-5, "intertwining_tolerance": 1e-5,
        "closed_form_tolerance": 1e-6, "closed_form_max": 1, "hermite_tail_tol": 1e-6,
        "condition_tolerance": 1e-4,
    },
    "shubin": {
        "symbol": "h0", "phase_dim": 2, "rho": 1.0, "m0": 2.0, "m1": 2.0,
        "radii": [5.0, 10.0, 20.0, 40.0], "n_samples": 1024, "expect": "auto",
        "stability_tolerance": 1e-10, "zero_tolerance": 1e-10,
    },
    "witness": {
        "spec": "landau", "N": 48, "shift": 1.0, "kappa_index": 3, "residual_tolerance": 1e-5,
        "outer_mass_min": 0.1, "kernel_threshold": 1e-6, "control": True,
    },
}

_DEFAULT_POINTS = {"landau": 48, "bopp": 52, "identity": 32}


@dataclass
class ScenarioResult:
    """Outcome of one scenario: JSON report, CSV tables and optional matrices."""

    name: str
    report: dict
    tables: dict = field(default_factory=dict)
    matrices: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.report.get("passed"))


def merge_config(name: str, config: dict | None) -> dict:
    """Overlay ``config`` on the scenario defaults, rejecting unknown keys."""
    if name not in DEFAULTS:
        raise ConfigError(f"unknown scenario {name!r}")
    cfg = copy.deepcopy(DEFAULTS[name])
    config = config or {}
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(config) - set(cfg))
    if unknown:
        raise ConfigError(f"unknown config keys for {name}: {unknown}")
    cfg.update(copy.deepcopy(config))
    return cfg


def _int(cfg, key, lo=0, even=False):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < lo:
        raise ConfigError(f"{key} must be an integer >= {lo}, got {val!r}")
    if even and val % 2:
        raise ConfigError(f"{key} must be even, got {val}")
    return int(val)


def _pos(cfg, key):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not val > 0:
        raise ConfigError(f"{key} must be a positive number, got {val!r}")
    return float(val)


def _check(name, value, tolerance, mode="max"):
    """One check entry; ``mode='max'`` means value must not exceed tolerance."""
    value = float(value) if value is not None else float("nan")
    ok = value <= tolerance if mode == "max" else value >= tolerance
    return {"name": name, "value": value, "tolerance": tolerance, "mode": mode,
            "passed": bool(ok)}


def _report(name, cfg, seed, grids, checks, results):
    return {"scenario": name, "version": __version__, "config": cfg, "seed": seed,
            "grid": {k: g.to_dict() for k, g in grids.items()},
            "tolerances": {c["name"]: c["tolerance"] for c in checks},
            "checks": checks, "results": results,
            "passed": all(c["passed"] for c in checks)}


def _map(func, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(func, items))
    return [func(x) for x in items]


def _symbol(text, phase_dim):
    if isinstance(text, str) and text.strip() == _HO and phase_dim == 2:
        return harmonic_oscillator()
    try:
        return parse_symbol(text, phase_dim)
    except WeylExtError as exc:
        raise ConfigError(str(exc)) from exc


def _lowest_pairs(A: OperatorMatrix, count: int) -> list:
    res = eigh(A.matrix, hermiticity_tol=1e-6)
    scale = 1 / np.sqrt(A.in_grid.cell)
    return [(float(res.values[j]), StateVector(A.in_grid, res.vectors[:, j] * scale))
            for j in range(count)]


def _resolve_spec(value) -> ExtensionSpec:
    if isinstance(value, dict):
        try:
            return ExtensionSpec.from_dict(value)
        except (KeyError, TypeError, ValueError, WeylExtError) as exc:
            raise ConfigError(f"invalid extension spec: {exc}") from exc
    table = {"landau": landau_spec, "bopp": bopp_spec, "identity": identity_spec}
    if value not in table:
        raise ConfigError(f"spec must be one of {sorted(table)} or a spec object, got {value!r}")
    return table[value]()


def _base_grid(spec: ExtensionSpec, N, L) -> Grid:
    if L is not None:
        return Grid.uniform(spec.n, float(L), N)
    try:
        return matched_grid(spec, N)
    except WeylExtError as exc:
        raise ConfigError(f"{exc}; set L explicitly") from exc


def _transfer_table(pairs):
    return csv_table(["j", "l", "lambda", "residual"],
                     ([p.j, p.l, p.value, p.residual] for p in pairs))


def _closed_forms(spec_name, ext, x_grid, max_index, tail_tol):
    closed = {"landau": landau_intertwiner_closed, "bopp": bopp_intertwiner_closed}[spec_name]
    hs = hermite_oracle(max_index, x_grid, tail_tol=tail_tol)
    out = []
    for j, phi in enumerate(hs):
        for l, chi in enumerate(hs):
            gen = ext.state(phi, chi)
            ref = closed(phi, chi)
            out.append({"phi": j, "chi": l, "relative_error": norm(gen - ref) / norm(ref)})
    return out


# ---------------------------------------------------------------- scenarios

def run_ho_spectrum(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Lowest eigenvalues of the discretised harmonic oscillator against ``2j + 1``."""
    cfg = merge_config("ho-spectrum", config)
    N = _int(cfg, "N", 2, even=True)
    L = _pos(cfg, "L")
    n = _int(cfg, "n_eigs")
    tol = _pos(cfg, "tolerance")
    if n > N:
        raise ConfigError(f"n_eigs = {n} exceeds N = {N}")
    grid = Grid.uniform(1, L, N)
    H = quantize_quadratic(harmonic_oscillator(), grid)
    w = eigh(H.matrix).values[:n]
    target = 2 * np.arange(n) + 1.0
    err = np.abs(w - target)
    checks = [_check("max_eigenvalue_error", err.max() if n else 0.0, tol)]
    results = {"eigenvalues": w, "targets": target, "errors": err}
    table = csv_table(["j", "eigenvalue", "target", "error"],
                      zip(range(n), w, target, err))
    return ScenarioResult("ho-spectrum", _report("ho-spectrum", cfg, seed, {"x": grid}, checks,
                                                 results),
                          {"ho_spectrum.csv": table}, {"ho": H})


def _extension_scenario(name, spec, cfg, seed, jobs) -> ScenarioResult:
    N = _int(cfg, "N", 2, even=True)
    j_max = _int(cfg, "j_max")
    l_max = _int(cfg, "l_max")
    gap = _pos(cfg, "cluster_gap")
    min_size = _int(cfg, "cluster_min_size", 1)
    a = _symbol(cfg["symbol"], 2)
    if j_max >= N or l_max >= N:
        raise ConfigError("j_max and l_max must be below N")
    x_grid = matched_grid(spec, N)
    ext = Extension(spec, x_grid)
    A = operator_of(a, x_grid)
    A_t = ext.extend(A)
    if name == "bopp":
        D = bopp_operator(a, 1, ext.grid)
    else:
        D = operator_of(extend_symbol(a, spec), ext.grid)

    def report_of(item):
        M, route = item
        return spectrum_report(M, route, gap=gap, min_multiplicity=min_size,
                               cutoff_fraction=cfg["cutoff_fraction"])

    reps = dict(zip(["tensor", "direct"],
                    _map(report_of, [(A_t, "tensor"), (D, "direct")], jobs)))
    levels = [float(v) for v in cfg["levels"]]
    lt = _pos(cfg, "level_tolerance")
    matched = {r: match_levels(rep, levels, lt) for r, rep in reps.items()}
    checks = []
    for route, rows in matched.items():
        for row in rows:
            lev = row["target"]
            checks.append(_check(f"{route}_level_{lev:g}_error",
                                 row["error"] if row["error"] is not None else np.inf, lt))
            checks.append(_check(f"{route}_level_{lev:g}_multiplicity", row["multiplicity"],
                                 cfg["min_multiplicity"], mode="min"))
    disc = []
    for t_row, d_row in zip(matched["tensor"], matched["direct"]):
        if t_row["value"] is None or d_row["value"] is None:
            d = np.inf
        else:
            d = abs(t_row["value"] - d_row["value"])
        disc.append({"level": t_row["target"], "discrepancy": d})
        checks.append(_check(f"route_discrepancy_{t_row['target']:g}", d,
                             _pos(cfg, "route_tolerance")))

    # every tensor cluster below the cutoff is an eigenvalue of A and conversely
    base = eigh(A.matrix, hermiticity_tol=1e-6).values
    rep = reps["tensor"]
    base = base[base <= rep.cutoff] if rep.cutoff is not None else base
    vals = rep.values
    set_gap = 0.0
    if len(vals) and len(base):
        set_gap = max(np.abs(vals[:, None] - base[None, :]).min(axis=1).max(),
                      np.abs(base[:, None] - vals[None, :]).min(axis=1).max())
    elif len(vals) != len(base):
        set_gap = np.inf
    checks.append(_check("tensor_set_equality", set_gap, lt))

    pairs = _lowest_pairs(A, j_max + 1)
    chis = hermite_oracle(l_max, ext.y_grid, tail_tol=_pos(cfg, "hermite_tail_tol"))
    transferred = transfer_eigenpairs(pairs, spec, chis, A_tilde=A_t, ext=ext)
    worst = max(p.residual for p in transferred)
    checks.append(_check("transfer_residual", worst, _pos(cfg, "residual_tolerance")))
    gram = gram_check(spec, [p[1] for p in pairs], chis, ext=ext)
    results = {"routes": {r: rep.to_dict() for r, rep in reps.items()}, "levels": matched,
               "route_discrepancy": disc, "transfer": [p.to_dict() for p in transferred],
               "gram_deviation": gram, "unitarity_defect": unitarity_defect(ext.s_inv_op),
               "set_equality_gap": set_gap}
    tables = {f"{name}_clusters_{r}.csv": rep.to_csv() for r, rep in reps.items()}
    tables[f"{name}_transfer.csv"] = _transfer_table(transferred)
    if name == "bopp" and isinstance(a, QuadraticSymbol):
        cf = _closed_forms("bopp", ext, x_grid, _int(cfg, "closed_form_max"),
                           _pos(cfg, "hermite_tail_tol"))
        results["closed_forms"] = cf
        checks.append(_check("closed_form_relative_error",
                             max(c["relative_error"] for c in cf),
                             _pos(cfg, "closed_form_tolerance")))
    grids = {"x": x_grid, "y": ext.y_grid}
    return ScenarioResult(name, _report(name, cfg, seed, grids, checks, results), tables,
                          {f"{name}_tensor": A_t, f"{name}_direct": D})


def run_landau(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Landau operator by the tensor-conjugation and direct routes."""
    return _extension_scenario("landau", landau_spec(), merge_config("landau", config), seed, jobs)


def run_bopp(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Bopp operator by both routes plus the closed-form intertwiners."""
    return _extension_scenario("bopp", bopp_spec(1), merge_config("bopp", config), seed, jobs)


def run_covariance(config=None, seed=0, jobs=1) -> ScenarioResult:
    """``Op(a o s)`` against ``S^{-1} Op(a) S`` for random free ``s`` in ``Sp(2)``."""
    cfg = merge_config("covariance", config)
    N = _int(cfg, "N", 2, even=True)
    grid = Grid.uniform(1, _pos(cfg, "L"), N)
    count = _int(cfg, "n_matrices")
    over = _int(cfg, "oversample", 1)
    a = GaussianSymbol(np.eye(2), name="exp(-(x**2 + xi**2)/2)") if cfg["symbol"] is None \
        else _symbol(cfg["symbol"], 2)
    hs = hermite_oracle(_int(cfg, "j_max"), grid, tail_tol=_pos(cfg, "hermite_tail_tol"))
    rng = np.random.default_rng(seed)
    mats = [random_free_symplectic(rng, 1, _pos(cfg, "strength"), _pos(cfg, "min_det_b"))
            for _ in range(count)]
    A = quantize(a, grid)

    def one(s):
        W = w_from_symplectic(s)
        S = build_metaplectic(W, grid, oversample=over)
        S_inv = inverse_metaplectic(W, grid, oversample=over)
        A_s = quantize(a.compose(s.S), grid)
        res = max(norm(A_s.apply(v) - S_inv.apply(A.apply(S.apply(v)))) / norm(v) for v in hs)
        return {"s": s.S, "det_b": float(s.S[0, 1]), "residual": float(res),
                "unitarity_defect": unitarity_defect(S)}

    rows = _map(one, mats, jobs)
    worst = max((r["residual"] for r in rows), default=0.0)
    checks = [_check("max_covariance_residual", worst, _pos(cfg, "tolerance"))]
    table = csv_table(["index", "s11", "s12", "s21", "s22", "residual", "unitarity_defect"],
                      ([i, *np.ravel(r["s"]), r["residual"], r["unitarity_defect"]]
                       for i, r in enumerate(rows)))
    results = {"symbol": getattr(a, "name", str(cfg["symbol"])), "samples": rows}
    return ScenarioResult("covariance",
                          _report("covariance", cfg, seed, {"x": grid}, checks, results),
                          {"covariance.csv": table})


def run_intertwine_check(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Gram, transfer and intertwining residuals for a chosen extension."""
    cfg = merge_config("intertwine-check", config)
    spec = _resolve_spec(cfg["spec"])
    N = cfg["N"] if cfg["N"] is not None else _DEFAULT_POINTS.get(spec.name, 32)
    cfg["N"] = N
    N = _int(cfg, "N", 2, even=True)
    j_max = _int(cfg, "j_max")
    l_max = _int(cfg, "l_max")
    x_grid = _base_grid(spec, N, cfg["L"])
    ext = Extension(spec, x_grid)
    a = _symbol(cfg["symbol"], 2 * spec.n)
    A = operator_of(a, x_grid)
    A_t = ext.extend(A)
    tail = _pos(cfg, "hermite_tail_tol")
    if spec.n == 1:
        chis = hermite_oracle(l_max, ext.y_grid, tail_tol=tail)
    else:
        chis = [StateVector.from_function(ext.y_grid, lambda *y: np.pi ** (-spec.k / 4)
                                          * np.exp(-sum(c ** 2 for c in y) / 2))]
    pairs = _lowest_pairs(A, j_max + 1)
    G = gram_matrix(spec, [p[1] for p in pairs], chis, ext=ext)
    gram = float(np.abs(G - np.eye(G.shape[0])).max())
    gram_cond = float(np.linalg.cond(G))
    transferred = transfer_eigenpairs(pairs, spec, chis, A_tilde=A_t, ext=ext)
    # intertwining on the Hermite class (or the eigenbasis when n > 1)
    probes = hermite_oracle(j_max, x_grid, tail_tol=tail) if spec.n == 1 else [p[1] for p in pairs]
    inter = 0.0
    for chi in chis:
        for v in probes:
            lhs = A_t.apply(ext.state(v, chi))
            rhs = ext.state(A.apply(v), chi)
            inter = max(inter, norm(lhs - rhs) / norm(rhs))
    # adjoint relation T* A~ = A T* on extended test vectors
    adj = 0.0
    for chi in chis:
        T = build_intertwiner(spec, chi, ext=ext)
        for v in probes:
            for chi2 in chis:
                Psi = ext.state(v, chi2)
                lhs = T.adjoint_apply(A_t.apply(Psi))
                rhs = A.apply(T.adjoint_apply(Psi))
                adj = max(adj, norm(lhs - rhs) / norm(A_t.apply(Psi)))
    # pull an extended eigenvector back to the base operator
    top = transferred[-1]
    l_found, phi_back = pull_back(top.vector, chis, ext)
    back = np.inf if phi_back is None else \
        norm(A.apply(phi_back) - top.value * phi_back) / (abs(top.value) * norm(phi_back))
    checks = [_check("gram_deviation", gram, _pos(cfg, "gram_tolerance")),
              _check("transfer_residual", max(p.residual for p in transferred),
                     _pos(cfg, "residual_tolerance")),
              _check("intertwining_residual", inter, _pos(cfg, "intertwining_tolerance")),
              _check("adjoint_intertwining_residual", adj, _pos(cfg, "intertwining_tolerance")),
              _check("gram_condition_excess", gram_cond - 1, _pos(cfg, "condition_tolerance")),
              _check("pull_back_residual", back, _pos(cfg, "residual_tolerance"))]
    results = {"spec": spec.to_dict(), "gram_deviation": gram, "gram_condition": gram_cond,
               "intertwining_residual": inter, "adjoint_intertwining_residual": adj,
               "pull_back": {"j": top.j, "l": top.l, "window": l_found, "residual": back},
               "transfer": [p.to_dict() for p in transferred]}
    if spec.name in ("landau", "bopp") and spec.n == 1 and cfg["L"] is None:
        cf = _closed_forms(spec.name, ext, x_grid, _int(cfg, "closed_form_max"), tail)
        results["closed_forms"] = cf
        checks.append(_check("closed_form_relative_error",
                             max(c["relative_error"] for c in cf),
                             _pos(cfg, "closed_form_tolerance")))
    grids = {"x": x_grid, "y": ext.y_grid}
    return ScenarioResult("intertwine-check",
                          _report("intertwine-check", cfg, seed, grids, checks, results),
                          {"intertwine_transfer.csv": _transfer_table(transferred)},
                          {"intertwine_extended": A_t})


_NAMED_SYMBOLS = {
    "h0": (lambda: harmonic_oscillator(), "pass"),
    "landau": (lambda: extend_symbol(harmonic_oscillator(), landau_spec()), "fail"),
    "bopp": (lambda: bopp_symbol(harmonic_oscillator(), 1), "fail"),
}


def run_shubin(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Sampled Shubin-class diagnostics for a symbol."""
    cfg = merge_config("shubin", config)
    text = cfg["symbol"]
    if text in _NAMED_SYMBOLS:
        make, auto = _NAMED_SYMBOLS[text]
        a = make()
    else:
        a = _symbol(text, _int(cfg, "phase_dim", 2, even=True))
        auto = None
    expect = auto if cfg["expect"] == "auto" else cfg["expect"]
    if expect not in (None, "pass", "fail"):
        raise ConfigError(f"expect must be 'auto', 'pass', 'fail' or null, got {expect!r}")
    radii = cfg["radii"]
    try:
        rep = classify(a, float(cfg["rho"]), float(cfg["m0"]), float(cfg["m1"]), radii,
                       n_samples=_int(cfg, "n_samples", 1), seed=seed, name=str(text))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    per = rep.growth.per_radius
    checks = []
    if expect == "pass":
        checks.append(_check("verdict_pass", float(rep.passes), 1.0, mode="min"))
        stab = _pos(cfg, "stability_tolerance")
        lo = [p["lower_ratio"] for p in per]
        hi = [p["upper_ratio"] for p in per]
        checks.append(_check("lower_constant_spread", max(lo) - min(lo), stab))
        checks.append(_check("upper_constant_spread", max(hi) - min(hi), stab))
    elif expect == "fail":
        checks.append(_check("verdict_fail", float(not rep.passes), 1.0, mode="min"))
        zt = _pos(cfg, "zero_tolerance")
        for p in per:
            checks.append(_check(f"sphere_min_over_R^m0_at_{p['radius']:g}",
                                 p["min_abs"] / p["radius"] ** float(cfg["m0"]), zt))
    results = rep.to_dict()
    results["expect"] = expect
    table = csv_table(["radius", "min_abs", "max_abs", "lower_ratio", "upper_ratio"],
                      ([p["radius"], p["min_abs"], p["max_abs"], p["lower_ratio"],
                        p["upper_ratio"]] for p in per))
    return ScenarioResult("shubin", _report("shubin", cfg, seed, {}, checks, results),
                          {"shubin_per_radius.csv": table})


def run_witness(config=None, seed=0, jobs=1) -> ScenarioResult:
    """Non-decaying kernel element of an extended operator, plus kernel coherence."""
    cfg = merge_config("witness", config)
    spec = _resolve_spec(cfg["spec"])
    if spec.n != 1:
        raise ConfigError("the witness scenario uses n = 1 extensions")
    N = _int(cfg, "N", 2, even=True)
    x_grid = _base_grid(spec, N, None)
    ext = Extension(spec, x_grid)
    H = quantize_quadratic(harmonic_oscillator(), x_grid)
    A = H - float(cfg["shift"]) * OperatorMatrix.identity(x_grid)
    H_t = ext.extend(H)
    A_t = ext.extend(A)
    kt = _pos(cfg, "kernel_threshold")
    checks = []
    results = {"spec": spec.to_dict()}
    wave = plane_wave(ext.y_grid, _int(cfg, "kappa_index"))
    try:
        w = nonhypoellipticity_witness(A, spec, wave, ext=ext, A_tilde=A_t, kernel_threshold=kt,
                                       residual_tolerance=_pos(cfg, "residual_tolerance"),
                                       outer_mass_min=_pos(cfg, "outer_mass_min"))
        results["witness"] = w.to_dict()
        checks.append(_check("witness_residual", w.residual, w.residual_tolerance))
        checks.append(_check("outer_mass_ratio", w.outer_mass, w.outer_mass_min, mode="min"))
    except PreconditionError as exc:
        results["witness"] = {"error": str(exc)}
        checks.append(_check("witness_residual", np.inf, _pos(cfg, "residual_tolerance")))
    if cfg["control"]:
        res = eigh(A.matrix, hermiticity_tol=1e-6)
        i = int(np.argmin(np.abs(res.values)))
        phi = StateVector(x_grid, res.vectors[:, i] / np.sqrt(x_grid.cell))
        chi = hermite_oracle(0, ext.y_grid, tail_tol=1e-6)[0]
        results["control_outer_mass"] = outer_mass_ratio(ext.state(phi, chi))
    probes = {"invertible": kernel_probe(H, H_t, kt), "shifted": kernel_probe(A, A_t, kt)}
    results["kernel_probes"] = {k: p.to_dict() for k, p in probes.items()}
    for k, p in probes.items():
        checks.append(_check(f"kernel_flags_agree_{k}", float(p.consistent), 1.0, mode="min"))
    grids = {"x": x_grid, "y": ext.y_grid}
    table = csv_table(["case", "sigma_min", "sigma_min_extended", "has_kernel",
                       "extended_has_kernel"],
                      ([k, p.sigma_min, p.sigma_min_extended, p.has_kernel,
                        p.extended_has_kernel] for k, p in probes.items()))
    return ScenarioResult("witness", _report("witness", cfg, seed, grids, checks, results),
                          {"witness_kernel.csv": table}, {"witness_extended": A_t})


SCENARIOS = {
    "ho-spectrum": run_ho_spectrum,
    "landau": run_landau,
    "bopp": run_bopp,
    "covariance": run_covariance,
    "intertwine-check": run_intertwine_check,
    "shubin": run_shubin,
    "witness": run_witness,
}


def run(name: str, config=None, seed: int = 0, jobs: int = 1) -> ScenarioResult:
    """Run scenario ``name``; raises :class:`ConfigError` on bad input."""
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    return SCENARIOS[name](config, seed=seed, jobs=jobs)
