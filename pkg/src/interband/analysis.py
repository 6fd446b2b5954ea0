"""Collapse and revival extraction, size rescaling and parameter scans.

The envelope of a Rabi-like signal is the spread (max - min) inside a centred
sliding window a few resonance periods wide. A collapse is the envelope
falling below half of its initial value; the revival time is the first
return of the envelope to its largest later value. Flat envelope plateaus are
common (one window-wide maximum covers many samples), so within the plateau
the revival time is taken at the largest raw oscillation maximum.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .errors import NumericalError
from .params import DerivedParams, ModelParams, derive_parameters
from .propagate import TimeSeries
from .runs import run_spin
from .spin import predict_revival_time

__all__ = [
    "RevivalRecord",
    "ScalingTable",
    "ScanRow",
    "AnalysisError",
    "NoCollapseError",
    "SCAN_AXES",
    "SCAN_COLUMNS",
    "envelope",
    "extract_revival",
    "scaling_collapse",
    "scan_revival",
    "scan_rows_for_csv",
]

SCAN_AXES = ("g", "Delta", "F", "L", "W_x", "t_a", "t_b")
SCAN_COLUMNS = ("axis", "t_rev_pred", "t_rev_meas", "collapse_depth", "status")
DEFAULT_WINDOW_PERIODS = 3.0
MIN_SPAN = 1.3  # series must cover this multiple of the predicted revival time


class AnalysisError(NumericalError):
    """A time series that does not support the requested analysis."""


class NoCollapseError(AnalysisError):
    pass


@dataclass(frozen=True)
class RevivalRecord:
    t_rev_measured: float
    t_rev_predicted: float
    collapse_depth: float
    model_tag: str
    L: int
    g: float | None = None
    t_collapse: float | None = None
    params: ModelParams | None = None

    def __post_init__(self):
        if not self.t_rev_measured > 0:
            raise ValueError(f"t_rev_measured must be positive, got {self.t_rev_measured}")
        if not 0.0 <= self.collapse_depth <= 1.0:
            raise ValueError(f"collapse_depth must lie in [0, 1], got {self.collapse_depth}")

    @property
    def ratio(self) -> float:
        return self.t_rev_measured / self.t_rev_predicted


def _spacing(ts: TimeSeries) -> float:
    if len(ts) < 3:
        raise AnalysisError("series too short: need at least three samples")
    steps = np.diff(ts.times)
    h = float(steps.mean())
    if np.max(np.abs(steps - h)) > 1e-6 * h:
        raise AnalysisError("envelope needs uniformly spaced samples")
    return h


def envelope(ts: TimeSeries, window: float, t_res: float | None = None) -> TimeSeries:
    """Centred sliding max minus sliding min over ``window`` (a time).

    Only points whose whole window lies inside the series are returned. With
    ``t_res`` given, windows shorter than two resonance periods are refused.
    """
    if t_res is not None and window < 2.0 * t_res * (1 - 1e-12):
        raise ValueError(f"window {window:.6g} is shorter than 2 T_res = {2 * t_res:.6g}")
    h = _spacing(ts)
    span = ts.times[-1] - ts.times[0]
    if window > span:
        raise AnalysisError(f"window {window:.6g} exceeds the series span {span:.6g}")
    half = max(1, int(round(window / h / 2)))
    size = 2 * half + 1
    if size > len(ts):
        raise AnalysisError(f"window {window:.6g} exceeds the series span {span:.6g}")
    spread = maximum_filter1d(ts.values, size) - minimum_filter1d(ts.values, size)
    keep = slice(half, len(ts) - half)
    meta = dict(ts.meta, envelope_window=window)
    return TimeSeries(ts.times[keep], spread[keep], meta)


def extract_revival(
    ts: TimeSeries,
    d: DerivedParams | None = None,
    *,
    params: ModelParams | None = None,
    t_res: float | None = None,
    t_rev_predicted: float | None = None,
    L: int | None = None,
    window: float | None = None,
    model_tag: str | None = None,
) -> RevivalRecord:
    """Locate the first collapse and the following revival in ``ts``.

    ``T_res`` comes from ``d`` (or ``t_res``) and sets the default window of
    three resonance periods. The prediction is taken from ``params``, or
    ``t_rev_predicted``, or 4L/U from ``d`` and ``L``; when it is finite the
    series must cover 1.3 times it.
    """
    if t_res is None:
        if d is None:
            raise ValueError("extract_revival needs DerivedParams or t_res")
        t_res = d.T_res
    if params is not None:
        L = params.L if L is None else L
        if t_rev_predicted is None:
            t_rev_predicted = predict_revival_time(params)
    if L is None:
        L = ts.meta.get("L", ts.meta.get("param.L"))
    if t_rev_predicted is None:
        if d is not None and L is not None:
            t_rev_predicted = math.inf if d.U == 0 else 4.0 * L / d.U
        else:
            t_rev_predicted = ts.meta.get("t_rev_predicted", math.nan)
    if window is None:
        window = DEFAULT_WINDOW_PERIODS * t_res
    span = ts.times[-1] - ts.times[0]
    if math.isfinite(t_rev_predicted) and span < MIN_SPAN * t_rev_predicted * (1 - 1e-9):
        raise AnalysisError(
            f"series too short: spans {span:.6g}, needs {MIN_SPAN} x t_rev = "
            f"{MIN_SPAN * t_rev_predicted:.6g}"
        )

    env = envelope(ts, window, t_res)
    e = env.values
    e0 = e[0]
    if e0 <= 0:
        raise NoCollapseError("no collapse detected: the series does not oscillate")
    below = np.nonzero(e < 0.5 * e0)[0]
    if below.size == 0:
        raise NoCollapseError(
            "no collapse detected: envelope never drops below 50% of its initial value"
        )
    i0 = below[0]
    jm = i0 + int(np.argmax(e[i0:]))
    if jm == i0:
        raise NoCollapseError("no collapse detected: no revival follows the decay")
    ic = i0 + int(np.argmin(e[i0:jm]))
    top = e[jm]
    a = jm
    while a > ic and e[a - 1] >= top - 1e-12:
        a -= 1
    b = jm
    while b < e.size - 1 and e[b + 1] >= top - 1e-12:
        b += 1
    # envelope index i is raw index i + half; widen the plateau by half a window
    half = int(np.searchsorted(ts.times, env.times[0]))
    lo, hi = a, b + 2 * half + 1
    k = lo + int(np.argmax(ts.values[lo:hi]))
    g = params.g if params is not None else ts.meta.get("param.g")
    return RevivalRecord(
        t_rev_measured=float(ts.times[k]),
        t_rev_predicted=float(t_rev_predicted),
        collapse_depth=float(min(1.0, e[ic] / e0)),
        model_tag=model_tag or ts.meta.get("model", "spin"),
        L=int(L) if L is not None else 0,
        g=g,
        t_collapse=float(env.times[ic]),
        params=params,
    )


@dataclass(frozen=True)
class ScalingTable:
    """Rows ``(g, L, t_meas * 2pi/L, t_pred * 2pi/L)`` sorted by g then L.

    ``spread[g]`` is the largest pairwise relative difference of the rescaled
    measured times, ``(a - b) / min(a, b)``, or ``None`` when only one size is
    present for that g.
    """

    rows: list
    spread: dict

    @property
    def max_spread(self) -> float | None:
        values = [s for s in self.spread.values() if s is not None]
        return max(values) if values else None


def scaling_collapse(records) -> ScalingTable:
    rows = []
    by_g: dict = {}
    for r in records:
        scale = 2.0 * math.pi / r.L
        rows.append((r.g, r.L, r.t_rev_measured * scale, r.t_rev_predicted * scale))
        by_g.setdefault(r.g, {}).setdefault(r.L, []).append(r.t_rev_measured * scale)
    rows.sort(key=lambda row: (math.inf if row[0] is None else row[0], row[1], row[2]))
    spread = {}
    for g, sizes in by_g.items():
        if len(sizes) < 2:
            spread[g] = None
            continue
        values = sorted(v for vs in sizes.values() for v in vs)
        spread[g] = max((b - a) / min(a, b) for a, b in combinations(values, 2))
    return ScalingTable(rows=rows, spread=spread)


@dataclass(frozen=True)
class ScanRow:
    value: float
    t_rev_pred: float
    t_rev_meas: float | None
    collapse_depth: float | None
    status: str
    record: RevivalRecord | None = None


def _point(base: ModelParams, axis: str, value, simulate: bool, window_periods: float) -> ScanRow:
    try:
        p = base.replace(L=int(value), N=int(value)) if axis == "L" else base.replace(**{axis: value})
    except ValueError as exc:
        return ScanRow(value, math.nan, None, None, f"error: {exc}")
    pred = predict_revival_time(p)
    if not math.isfinite(pred):
        return ScanRow(value, pred, None, None, "divergent")
    if not simulate:
        return ScanRow(value, pred, None, None, "predicted")
    try:
        d = derive_parameters(p)
        ts = run_spin(p)
        rec = extract_revival(ts, d, params=p, window=window_periods * d.T_res, model_tag="spin")
    except (ValueError, NumericalError) as exc:
        return ScanRow(value, pred, None, None, f"error: {exc}")
    return ScanRow(value, pred, rec.t_rev_measured, rec.collapse_depth, "ok", rec)


def scan_revival(
    base: ModelParams,
    axis: str,
    values,
    simulate: bool = False,
    jobs: int = 1,
    window_periods: float = DEFAULT_WINDOW_PERIODS,
) -> list[ScanRow]:
    """Predicted (and optionally spin-simulated) revival times along one axis.

    Rows come back sorted by the axis value whatever order the points finish
    in; a point that fails is reported in its ``status`` and the scan goes on.
    """
    if axis not in SCAN_AXES:
        raise ValueError(f"unknown scan axis {axis!r}; valid axes: {', '.join(SCAN_AXES)}")
    values = sorted(values)
    if not values:
        return []
    args = [(base, axis, v, simulate, window_periods) for v in values]
    if jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(values))) as pool:
            return list(pool.map(_point, *zip(*args)))
    return [_point(*a) for a in args]


def scan_rows_for_csv(rows: list[ScanRow]):
    for r in rows:
        yield (r.value, r.t_rev_pred, r.t_rev_meas, r.collapse_depth, r.status)
