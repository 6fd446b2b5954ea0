import math
import random

import numpy as np
import pytest

from interband import FIG1_PARAMS, TimeSeries, derive_parameters, predict_revival_time, run_spin
from interband.analysis import (
    SCAN_AXES,
    AnalysisError,
    NoCollapseError,
    RevivalRecord,
    envelope,
    extract_revival,
    scaling_collapse,
    scan_revival,
)


def beat_signal(V=1.0, delta=0.01, periods=1.5, step=0.02):
    t = np.arange(0, periods * 2 * math.pi / delta, step)
    c2 = np.cos(delta * t / 2) ** 2
    return TimeSeries(t, np.sin(V * t) ** 2 * c2 + (1 - c2) / 2)


def test_envelope_of_constant_is_zero():
    ts = TimeSeries(np.arange(100.0), np.full(100, 0.3))
    env = envelope(ts, 10.0)
    assert np.all(env.values == 0)
    assert len(env) == 100 - 10


def test_envelope_of_full_swing():
    V = 1.0
    t = np.arange(0, 60, 0.001)
    env = envelope(TimeSeries(t, np.sin(V * t) ** 2), 2 * math.pi / V, t_res=math.pi / V)
    assert np.all(np.abs(env.values - 1) < 1e-3)
    assert env.times[0] == pytest.approx(math.pi, abs=1e-3)


def test_envelope_minimum_of_beat_signal():
    ts = beat_signal()
    env = envelope(ts, 3 * math.pi)
    assert env.times[np.argmin(env.values)] == pytest.approx(math.pi / 0.01, rel=0.02)


def test_envelope_errors():
    ts = TimeSeries(np.arange(50.0), np.zeros(50))
    with pytest.raises(AnalysisError):
        envelope(ts, 60.0)
    with pytest.raises(ValueError):
        envelope(ts, 5.0, t_res=3.0)
    with pytest.raises(AnalysisError):
        envelope(TimeSeries([0.0, 1.0, 3.0, 4.0], np.zeros(4)), 2.0)


def test_extract_synthetic_revival():
    rec = extract_revival(beat_signal(), t_res=math.pi)
    assert rec.t_rev_measured == pytest.approx(2 * math.pi / 0.01, rel=0.02)
    assert rec.collapse_depth < 0.01
    assert rec.t_collapse == pytest.approx(math.pi / 0.01, rel=0.02)


@pytest.mark.parametrize("delta", [0.005, 0.0075, 0.01, 0.02, 0.035, 0.05])
def test_extract_beat_period_range(delta):
    rec = extract_revival(beat_signal(delta=delta), t_res=math.pi)
    assert rec.t_rev_measured == pytest.approx(2 * math.pi / delta, rel=0.02)


def test_monotone_series_has_no_collapse():
    t = np.linspace(0, 100, 1001)
    with pytest.raises(NoCollapseError, match="no collapse detected"):
        extract_revival(TimeSeries(t, t / 100), t_res=5.0)


def test_undamped_oscillation_has_no_collapse():
    t = np.arange(0, 200, 0.05)
    with pytest.raises(NoCollapseError):
        extract_revival(TimeSeries(t, np.sin(t) ** 2), t_res=math.pi)


def test_short_series_refused():
    d = derive_parameters(FIG1_PARAMS)
    ts = run_spin(FIG1_PARAMS, t_final=predict_revival_time(FIG1_PARAMS))
    with pytest.raises(AnalysisError, match="too short"):
        extract_revival(ts, d, params=FIG1_PARAMS)


def test_spin_run_at_fig1_parameters():
    d = derive_parameters(FIG1_PARAMS)
    rec = extract_revival(run_spin(FIG1_PARAMS), d, params=FIG1_PARAMS)
    assert 1.0 <= rec.ratio <= 1.25
    assert rec.collapse_depth < 0.25
    assert rec.model_tag == "spin" and rec.L == 5 and rec.g == 0.1


def test_prediction_from_derived_and_length():
    d = derive_parameters(FIG1_PARAMS)
    ts = run_spin(FIG1_PARAMS)
    a = extract_revival(ts, d, L=5)
    b = extract_revival(ts, d, params=FIG1_PARAMS)
    assert a.t_rev_predicted == pytest.approx(b.t_rev_predicted, rel=1e-15)
    assert a.t_rev_measured == b.t_rev_measured


def test_record_invariants():
    with pytest.raises(ValueError):
        RevivalRecord(0.0, 1.0, 0.1, "spin", 4)
    with pytest.raises(ValueError):
        RevivalRecord(1.0, 1.0, 1.5, "spin", 4)


def rec(L, t, g=0.1, pred=None):
    return RevivalRecord(t, pred if pred is not None else t, 0.1, "spin", L, g)


def test_scaling_exact_linearity():
    table = scaling_collapse([rec(4, 400.0), rec(6, 600.0)])
    assert table.spread[0.1] < 4 * np.finfo(float).eps
    assert [row[:2] for row in table.rows] == [(0.1, 4), (0.1, 6)]
    assert table.rows[0][2] == pytest.approx(200 * math.pi, rel=1e-15)


def test_scaling_single_size_flagged():
    table = scaling_collapse([rec(5, 500.0)])
    assert len(table.rows) == 1
    assert table.spread[0.1] is None
    assert table.max_spread is None


def test_scaling_order_invariant():
    records = [rec(4, 410.0), rec(5, 480.0), rec(6, 640.0), rec(4, 100.0, g=0.4), rec(5, 130.0, g=0.4)]
    ref = scaling_collapse(records)
    for seed in range(5):
        shuffled = records[:]
        random.Random(seed).shuffle(shuffled)
        out = scaling_collapse(shuffled)
        assert out.rows == ref.rows and out.spread == ref.spread
    expected = (640 * 2 * math.pi / 6 - 480 * 2 * math.pi / 5) / (480 * 2 * math.pi / 5)
    assert ref.spread[0.1] == pytest.approx(expected)


def test_rescaled_prediction_independent_of_size():
    records = []
    for L in (3, 4, 5, 6, 7, 8):
        p = FIG1_PARAMS.replace(L=L, N=L)
        records.append(rec(L, 1.0, pred=predict_revival_time(p)))
    values = {row[3] for row in scaling_collapse(records).rows}
    assert max(values) - min(values) <= 4 * np.spacing(max(values))


def test_scaling_of_spin_runs():
    records = []
    for L in (4, 5, 6):
        p = FIG1_PARAMS.replace(L=L, N=L)
        records.append(extract_revival(run_spin(p), derive_parameters(p), params=p))
    assert scaling_collapse(records).spread[0.1] < 0.15


def test_scan_g_prediction_only():
    rows = scan_revival(FIG1_PARAMS, "g", [0.2, 0.05, 0.1])
    assert [r.value for r in rows] == [0.05, 0.1, 0.2]
    assert all(r.status == "predicted" and r.t_rev_meas is None for r in rows)
    products = [r.value * r.t_rev_pred for r in rows]
    assert max(products) == pytest.approx(min(products), rel=1e-15)


def test_scan_bessel_zero_divergence():
    zero = 2.404825557695773
    F = FIG1_PARAMS.F
    far = scan_revival(FIG1_PARAMS, "t_b", [0.121])[0].t_rev_pred
    near = [zero + dx for dx in (-0.049, -0.02, -0.001, 0.0, 0.001, 0.02, 0.049)]
    rows = scan_revival(FIG1_PARAMS, "t_b", [x * F for x in near])
    for r in rows:
        assert r.t_rev_pred > 100 * far or r.status == "divergent"


def test_scan_edge_cases():
    assert scan_revival(FIG1_PARAMS, "g", []) == []
    with pytest.raises(ValueError, match=", ".join(SCAN_AXES)):
        scan_revival(FIG1_PARAMS, "V0", [1.0])
    rows = scan_revival(FIG1_PARAMS, "g", [0.0, 0.1], simulate=True)
    assert rows[0].status == "divergent" and math.isinf(rows[0].t_rev_pred)
    assert rows[1].status == "ok"


def test_scan_records_point_failures():
    rows = scan_revival(FIG1_PARAMS, "F", [-1.0, FIG1_PARAMS.F], simulate=True)
    assert rows[0].status.startswith("error:")
    assert rows[1].status == "ok"
    # a huge interaction gives no clean collapse; the scan still completes
    rows = scan_revival(FIG1_PARAMS, "g", [40.0, 0.1], simulate=True)
    assert rows[0].value == 0.1 and rows[0].status == "ok"
    assert rows[1].status.startswith("error:")


def test_scan_parallel_matches_serial():
    args = (FIG1_PARAMS, "L", [6, 4, 5])
    serial = scan_revival(*args, simulate=True)
    parallel = scan_revival(*args, simulate=True, jobs=3)
    assert [(r.value, r.t_rev_meas, r.status) for r in serial] == [
        (r.value, r.t_rev_meas, r.status) for r in parallel
    ]
    assert [r.value for r in serial] == [4, 5, 6]
