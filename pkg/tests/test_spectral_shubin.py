import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylext.extension import extend_symbol, landau_spec
from weylext.shubin import classify, derivative_ratio, growth_envelope, sphere_points
from weylext.spectral import cluster_eigenvalues, match_levels, spectrum_report
from weylext.symbols import GaussianSymbol, harmonic_oscillator
from weylext.wigner import bopp_symbol


def test_clusters_and_median():
    w = [1.0, 1.0002, 0.9999, 3.0, 3.0001, 5.0]
    cl = cluster_eigenvalues(w, gap=1e-3, min_multiplicity=2)
    assert [c.multiplicity for c in cl] == [3, 2]
    assert np.isclose(cl[0].value, 1.0)


@given(st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=40))
def test_cluster_counts_sum(w):
    cl = cluster_eigenvalues(w, gap=1e-3)
    assert sum(c.multiplicity for c in cl) == len(w)
    vals = [c.value for c in cl]
    assert vals == sorted(vals)


def test_spectrum_report_cutoff_and_levels():
    M = np.diag([1.0, 1.0, 3.0, 3.0, 3.0, 100.0])
    rep = spectrum_report(M, "direct", min_multiplicity=2)
    assert rep.values.tolist() == [1.0, 3.0]
    rows = match_levels(rep, [1, 3, 5], 1e-3)
    assert [r["ok"] for r in rows] == [True, True, False]
    assert rep.to_csv().splitlines()[0].startswith("index,value")


def test_sphere_points_are_unit():
    p = sphere_points(4, 100, seed=1)
    assert p.shape == (100, 4)
    assert np.allclose(np.linalg.norm(p, axis=1), 1)


def test_h0_passes_with_unit_constants():
    rep = classify(harmonic_oscillator(), 1, 2, 2, [5, 10, 20, 40])
    assert rep.passes
    assert np.isclose(rep.growth.C0_est, 1, atol=1e-10)
    assert np.isclose(rep.growth.C1_est, 1, atol=1e-10)


@pytest.mark.parametrize("a", [extend_symbol(harmonic_oscillator(), landau_spec()),
                               bopp_symbol(harmonic_oscillator(), 1)])
def test_degenerate_symbols_fail(a):
    rep = classify(a, 1, 2, 2, [5, 10, 20])
    assert not rep.passes
    assert all(p["min_abs"] <= 1e-10 * p["radius"] ** 2 for p in rep.growth.per_radius)
    assert rep.witnesses
    assert "not a proof" in rep.to_dict()["note"]


def test_gaussian_fails_lower_bound():
    env = growth_envelope(GaussianSymbol(np.eye(2)), 0, 0, [5, 10])
    assert env.violations


def test_derivative_ratio_h0_order_one():
    out = derivative_ratio(harmonic_oscillator(), 1, [5, 10])
    assert out[1]["worst"] <= 2 + 1e-6


def test_radii_validation():
    with pytest.raises(ValueError):
        growth_envelope(harmonic_oscillator(), 2, 2, [1, 10])
    with pytest.raises(ValueError):
        growth_envelope(harmonic_oscillator(), 2, 2, [10, 5])
