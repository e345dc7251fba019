import json
import math
import os

import pytest

import gstatarb as g


def test_version():
    assert g.__version__ == "0.1.0"


def test_builtin_binomial_has_strategy():
    r = g.check_builtin("sec34")
    assert r["status"] == "SaExists"
    assert r["strategy"] == pytest.approx((1.6, -1.4, -1.8), abs=1e-12)


def test_builtin_trinomial_is_certified():
    r = g.check_builtin("bondarenko-counterexample")
    assert r["status"] == "NsaCertified"
    assert r["diagnostics"]["gamma1"] == pytest.approx(2 / 3)
    assert r["pid_is_valid_emm"] is False


def test_check_model_json_and_errors():
    model = {
        "kind": "binomial",
        "prices": {"s0": 100, "up": 105, "down": 95, "uu": 110, "ud": 100, "dd": 90},
        "weights": [0.25, 0.3, 0.25, 0.2],
    }
    assert g.check_model(json.dumps(model))["kind"] == "binomial"
    with pytest.raises(g.ParseError):
        g.check_model("{")
    with pytest.raises(g.Error):
        g.check_model("{")


def test_analytics():
    assert g.exit_prob_lower(100, 90, 110, 0.02, 0.2) == pytest.approx(0.47496, abs=5e-6)
    assert g.exit_prob_lower(100, 90, 110, 0.1, 0.2) + g.exit_prob_upper(100, 90, 110, 0.1, 0.2) == pytest.approx(1)
    c = 0.01 * 0.1241 / 0.0837
    assert g.embedded_q(c, 0.1241, 0.0837) == pytest.approx(1.00189, abs=5e-6)
    phi = g.embedded_phi(0.05, 100, 1.2)
    assert len(phi) == 3 and all(math.isfinite(x) for x in phi)
    with pytest.raises(g.NoSaExists):
        g.embedded_phi(0.05, 100, 1.0)
    with pytest.raises(g.InvalidInterval):
        g.embedded_q(0.6, 0.1, 0.2)


def test_simulate_is_deterministic():
    a = g.simulate(runs=200, steps=300, seed=4, workers=1)
    b = g.simulate(runs=200, steps=300, seed=4, workers=2)
    assert a == b
    assert len(a["pnl"]) == 200
    assert a["median_gain"] == sorted(a["pnl"])[99]


def test_simulate_all_skipped():
    with pytest.raises(g.AllRunsSkipped):
        g.simulate(mu=0.0, c=0.01, runs=5, steps=100)


def test_sweep_rows():
    rows = g.sweep("c", [0.01, 0.02], runs=100, steps=200)
    assert [r["value"] for r in rows] == [0.01, 0.02]


def test_backtest_on_synthetic_series():
    dates, closes = g.synthetic_series(0.12, 0.08, 4 * 252, 3)
    r = g.backtest(dates, closes, boundary=0.1)
    assert r["final_position"] == 0.0
    assert r["cycles"]
    mu, sigma = g.mle_estimate(closes)
    assert sigma > 0


def test_load_shipped_data():
    data_dir = os.environ.get("GSTATARB_DATA_DIR")
    if not data_dir:
        pytest.skip("GSTATARB_DATA_DIR not set")
    dates, closes = g.load_csv(os.path.join(data_dir, "synthetic_gbm.csv"))
    assert len(dates) == len(closes) == 18 * 252 + 1
