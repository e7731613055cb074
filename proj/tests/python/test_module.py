import math

import numpy as np
import pytest
import scipy.stats

import bdar

# Two-regime reference model: buffer zone (-0.1, 0.15], delay 4.
PARAMS = {
    "p": 2,
    "d": 4,
    "phi1": [-0.1, 0.2, 0.1],
    "alpha1": [0.1, 0.3, 0.05],
    "phi2": [0.1, -0.2, 0.3],
    "alpha2": [0.05, 0.2, 0.1],
    "r_lower": -0.1,
    "r_upper": 0.15,
}


def test_simulate_deterministic():
    a, pre_a = bdar.simulate(PARAMS, 300, seed=7)
    b, pre_b = bdar.simulate(PARAMS, 300, seed=7)
    assert a == b
    assert pre_a == pre_b == 4  # max(p, d)
    assert len(a) == 304


def test_simulate_seed_sensitivity():
    a, _ = bdar.simulate(PARAMS, 100, seed=1)
    b, _ = bdar.simulate(PARAMS, 100, seed=2)
    assert a != b


def test_check_stationarity_values(validate):
    rep = bdar.check_stationarity(PARAMS)
    validate("stationarity_report", rep)
    assert rep["any_holds"] is True
    # Drift condition at second order: 0.3^2 + (sqrt(.3)+sqrt(.1))^2/2 = 0.65.
    assert rep["condition_ii"]["holds"] is True
    assert rep["condition_ii"]["value"] == pytest.approx(0.65, abs=1e-12)
    assert rep["condition_ii"]["r_used"] == 2.0
    assert rep["condition_i"]["holds"] is False
    assert rep["condition_iii"]["value"] == pytest.approx(1.21, abs=1e-12)


def test_fit_round_trip(validate):
    values, pre = bdar.simulate(PARAMS, 500, seed=20250825, pre_sample=6)
    res = bdar.fit(values, pre, p=2, config={"d_max": 5, "grid_thinning": 6})
    validate("fit_result", res)

    est = res["params"]
    assert est["p"] == 2
    assert est["d"] == 4
    assert est["r_lower"] <= est["r_upper"]
    assert res["n1"] + res["n2"] == 500
    assert len(res["standardized_residuals"]) == 500
    assert all(len(res["inference"]["se"][k]) == 3 for k in ("phi1", "alpha1", "phi2", "alpha2"))
    assert all(s > 0 for block in res["inference"]["se"].values() for s in block)

    # The reported loss replays exactly from the reported parameters.
    total, n1, n2, degenerate = bdar.neg2_loglik(est, values, pre)
    assert total == res["neg2_loglik"]
    assert (n1, n2) == (res["n1"], res["n2"])
    assert not degenerate


def test_select_order_table(validate):
    values, pre = bdar.simulate(PARAMS, 400, seed=99)
    table = bdar.select_order(values, pre, p_max=3, config={"d_max": 5, "grid_thinning": 8})
    validate("bic_table", table)
    assert [row["p"] for row in table["rows"]] == [1, 2, 3]
    assert 1 <= table["chosen_p"] <= 3
    ok = [row for row in table["rows"] if not row["failed"]]
    assert min(ok, key=lambda row: row["bic"])["p"] == table["chosen_p"]


def test_portmanteau_matches_scipy():
    rng = np.random.default_rng(42)
    x = rng.standard_normal(400).tolist()
    for m in (6, 12):
        stat, p = bdar.ljung_box(x, m)
        assert p == pytest.approx(scipy.stats.chi2.sf(stat, m), rel=1e-10)
        stat2, p2 = bdar.mcleod_li(x, m)
        assert p2 == pytest.approx(scipy.stats.chi2.sf(stat2, m), rel=1e-10)


def test_ljung_box_matches_statsmodels():
    sm = pytest.importorskip("statsmodels.stats.diagnostic")
    rng = np.random.default_rng(7)
    x = rng.standard_normal(300)
    stat, p = bdar.ljung_box(x.tolist(), 10)
    table = sm.acorr_ljungbox(x, lags=[10])
    assert stat == pytest.approx(float(table["lb_stat"].iloc[0]), rel=1e-8)
    assert p == pytest.approx(float(table["lb_pvalue"].iloc[0]), rel=1e-8)


def test_acf_matches_direct_computation():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(250)
    rho, band = bdar.acf(x.tolist(), 5)
    assert band == pytest.approx(1.96 / math.sqrt(250), rel=1e-12)
    xc = x - x.mean()
    denom = float(xc @ xc)
    for k in range(1, 6):
        expect = float(xc[k:] @ xc[:-k]) / denom
        assert rho[k - 1] == pytest.approx(expect, abs=1e-12)


def test_errors_surface_as_runtime_error():
    bad = dict(PARAMS, alpha1=[0.0, 0.3, 0.05])  # zero intercept in the volatility part
    with pytest.raises(RuntimeError):
        bdar.simulate(bad, 100, seed=1)
    with pytest.raises(RuntimeError):
        bdar.fit([0.1, -0.2, 0.3], 1, p=1)  # far too short


def test_run_mc_thread_count_invariance(validate):
    design = {
        "dgp": PARAMS,
        "innovation": {"kind": "standard_normal"},
        "sample_sizes": [150],
        "replications": 3,
        "seed": 13579,
        "mode": "estimation_study",
        "fit": {"d_max": 4, "grid_thinning": 10},
    }
    validate("mc_design", design)
    one = bdar.run_mc(design, n_threads=1)
    many = bdar.run_mc(design, n_threads=3)
    assert one == many
    validate("mc_report", one)
    row = one["per_n"][0]
    assert row["replications_used"] + row["failures"] == 3
