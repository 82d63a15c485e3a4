import json

import numpy as np
import pytest

from weylext.cli import main
from weylext.grid import Grid, OperatorMatrix
from weylext.io import dumps, export_matrix, load_matrix, wigner_csv
from weylext.scenarios import DEFAULTS, merge_config, run, run_landau
from weylext.errors import ConfigError


def _config(tmp_path, data):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_ho_spectrum_default(tmp_path, monkeypatch):
    monkeypatch.delenv("WEYLEXT_OUT", raising=False)
    assert main(["ho-spectrum", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "ho_spectrum.json").read_text())
    assert rep["passed"] and rep["version"] and rep["grid"]["x"]
    assert rep["tolerances"]["max_eigenvalue_error"] == 1e-6
    assert (tmp_path / "ho_spectrum.csv").read_text().startswith("j,eigenvalue")


def test_ho_spectrum_empty(tmp_path):
    assert main(["ho-spectrum", "--out", str(tmp_path),
                 "--config", _config(tmp_path, {"n_eigs": 0})]) == 0
    rep = json.loads((tmp_path / "ho_spectrum.json").read_text())
    assert rep["results"]["eigenvalues"] == []


def test_ho_spectrum_tolerance_floor(tmp_path):
    assert main(["ho-spectrum", "--out", str(tmp_path),
                 "--config", _config(tmp_path, {"tolerance": 1e-15})]) == 1


def test_bad_config_exit_2(tmp_path, capsys):
    assert main(["ho-spectrum", "--out", str(tmp_path),
                 "--config", _config(tmp_path, {"N": 63})]) == 2
    assert "config error" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["ho-spectrum", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["shubin", "--config", _config(tmp_path, {"nope": 1}),
                 "--out", str(tmp_path)]) == 2


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["no-such-scenario"])
    assert exc.value.code == 2


def test_env_overrides_out(tmp_path, monkeypatch):
    target = tmp_path / "env"
    monkeypatch.setenv("WEYLEXT_OUT", str(target))
    assert main(["shubin", "--out", str(tmp_path / "ignored")]) == 0
    assert (target / "shubin.json").exists()
    assert not (tmp_path / "ignored").exists()


def test_reports_are_byte_identical(tmp_path, monkeypatch):
    monkeypatch.delenv("WEYLEXT_OUT", raising=False)
    for d in ("a", "b"):
        assert main(["covariance", "--seed", "11", "--out", str(tmp_path / d)]) == 0
    a = (tmp_path / "a" / "covariance.json").read_bytes()
    assert a == (tmp_path / "b" / "covariance.json").read_bytes()


def test_shubin_expectations():
    assert run("shubin", {"symbol": "landau"}).passed
    assert run("shubin", {"symbol": "bopp"}).passed
    assert not run("shubin", {"symbol": "landau", "expect": "pass"}).passed
    rep = run("shubin", {"symbol": "x**2 + 2*xi**2", "expect": "pass"}).report
    assert rep["results"]["verdict"] == "consistent with class"


def test_intertwine_check_identity():
    res = run("intertwine-check", {"spec": "identity", "N": 32})
    assert res.passed
    assert "closed_forms" not in res.report["results"]


def test_halving_the_grid_shrinks_multiplicities():
    cfg = {"min_multiplicity": 1, "cluster_min_size": 1, "j_max": 1, "l_max": 1,
           "hermite_tail_tol": 1e-2}
    full = run_landau(dict(cfg, N=32)).report["results"]["levels"]
    half = run_landau(dict(cfg, N=16)).report["results"]["levels"]
    for route in ("tensor", "direct"):
        for a, b in zip(full[route], half[route]):
            assert b["multiplicity"] < a["multiplicity"]
    assert [r["multiplicity"] for r in full["tensor"]] == [32] * 4
    assert [r["multiplicity"] for r in half["tensor"]] == [16] * 4


def test_merge_config_rejects_unknown():
    with pytest.raises(ConfigError):
        merge_config("landau", {"bogus": 1})
    assert merge_config("landau", None) == DEFAULTS["landau"]


def test_print_defaults(capsys):
    assert main(["witness", "--print-defaults"]) == 0
    assert json.loads(capsys.readouterr().out)["N"] == 48


def test_matrix_dump_round_trip(tmp_path):
    g = Grid.uniform(1, 2.0, 4)
    M = OperatorMatrix(g, g, np.arange(16).reshape(4, 4) + 1j * np.eye(4))
    data, side = export_matrix(tmp_path / "m.bin", M)
    meta = json.loads(side.read_text())
    assert meta["shape"] == [4, 4] and meta["order"] == "column-major"
    # column-major: the second stored number is entry (1, 0)
    raw = np.fromfile(data, dtype=np.complex128)
    assert raw[1] == M.matrix[1, 0]
    assert np.array_equal(load_matrix(data).matrix, M.matrix)


def test_wigner_csv_columns():
    from weylext.grid import hermite_oracle
    from weylext.wigner import cross_wigner
    g = Grid.uniform(1, 4.0, 8)
    h = hermite_oracle(0, g, tail_tol=1e-3)[0]
    text = wigner_csv(cross_wigner(h, h))
    lines = text.splitlines()
    assert lines[0] == "x,xi,re,im" and len(lines) == 65


def test_dumps_handles_non_finite_and_complex():
    out = json.loads(dumps({"a": float("inf"), "b": 1 + 2j, "c": np.arange(2)}))
    assert out == {"a": "inf", "b": [1.0, 2.0], "c": [0, 1]}
