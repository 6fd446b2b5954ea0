"""Command-line entry point: ``interband {simulate,predict,scan,eigen} CONFIG``.

Exit status is 0 on success, 1 for invalid input, 2 when a basis or dense
matrix would exceed its capacity limit and 3 for numerical failures
(including time series with no detectable collapse).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    SCAN_AXES,
    SCAN_COLUMNS,
    extract_revival,
    scaling_collapse,
    scan_revival,
    scan_rows_for_csv,
)
from .config import RunConfig, read_run_config
from .errors import CapacityError, ConfigError, NumericalError
from .params import derive_parameters
from .runs import run_full, run_spin
from .spin import eigen_expansion, half_filling, predict_revival_time
from .tables import write_table, write_timeseries

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_NUMERICAL = 0, 1, 2, 3


def _header(cfg: RunConfig, command: str, **extra) -> dict:
    meta = {"reproducible": True, "command": command, "package_version": __version__}
    meta.update(cfg.snapshot())
    meta.update(extra)
    return meta


def _out_dir(cfg: RunConfig) -> Path:
    directory = cfg.directory
    directory.mkdir(parents=True, exist_ok=True)
    if not os.access(directory, os.W_OK):
        raise ConfigError(f"output directory is not writable: {directory}")
    return directory


def cmd_simulate(cfg: RunConfig) -> int:
    out = _out_dir(cfg)
    series = {}
    dt, sample_every = cfg.dt, cfg.sample_every
    if cfg.model in ("full", "both"):
        ts = run_full(cfg.params, t_final=cfg.t_final, dt=dt, sample_every=sample_every)
        series["full"] = ts
        # the spin run reuses the full-model grid so both series line up
        dt, sample_every = ts.meta["dt"], ts.meta["sample_every"]
    if cfg.model in ("spin", "both"):
        t_final = cfg.t_final
        if cfg.model == "both":
            t_final = series["full"].meta["t_final"]
        series["spin"] = run_spin(
            cfg.params, **cfg.spin, t_final=t_final, dt=dt, sample_every=sample_every
        )
    for tag, ts in series.items():
        path = write_timeseries(out / f"{cfg.prefix}_{tag}.csv", ts, _header(cfg, "simulate"))
        print(f"{tag}: {len(ts)} samples to t = {ts.times[-1]:.6g}, "
              f"norm drift {ts.meta['norm_drift']:.2e} -> {path}")

    if cfg.extract:
        rows = []
        for tag, ts in series.items():
            t_res = math.pi / abs(ts.meta["V_m"] if tag == "spin" else derive_parameters(cfg.params).V_m)
            try:
                rec = extract_revival(
                    ts, t_res=t_res, t_rev_predicted=ts.meta["t_rev_predicted"],
                    L=ts.meta.get("L", cfg.params.L), window=cfg.window, model_tag=tag,
                )
            except (ValueError, NumericalError) as exc:
                rows.append((tag, ts.meta["t_rev_predicted"], None, None, f"error: {exc}"))
                print(f"{tag}: revival not extracted ({exc})")
                continue
            rows.append((tag, rec.t_rev_predicted, rec.t_rev_measured, rec.collapse_depth, "ok"))
            print(f"{tag}: t_rev measured {rec.t_rev_measured:.6g}, predicted "
                  f"{rec.t_rev_predicted:.6g} (ratio {rec.ratio:.4f}), "
                  f"collapse depth {rec.collapse_depth:.3f}")
        write_table(
            out / f"{cfg.prefix}_revival.csv",
            ("model", "t_rev_pred", "t_rev_meas", "collapse_depth", "status"),
            rows,
            _header(cfg, "simulate"),
        )
    return EXIT_OK


def cmd_predict(cfg: RunConfig) -> int:
    p = cfg.params
    d = derive_parameters(p)
    t_rev = predict_revival_time(p)
    divergent = not math.isfinite(t_rev)
    print(f"x_a = t_a/F          {d.x_a:.10g}")
    print(f"x_b = t_b/F          {d.x_b:.10g}")
    print(f"V_m                  {d.V_m:.10g}")
    print(f"U                    {d.U:.10g}")
    print(f"Bloch period T_B     {d.T_B:.10g}")
    print(f"resonance time T_res {d.T_res:.10g}")
    print(f"T_res / T_B          {d.T_res / d.T_B:.6g}")
    if divergent:
        print("revival time         divergent (effective interaction vanishes)")
    else:
        print(f"revival time t_rev   {t_rev:.10g}")
    record = {
        "x_a": d.x_a, "x_b": d.x_b, "V_m": d.V_m, "U": d.U, "T_B": d.T_B,
        "T_res": d.T_res, "t_rev": t_rev, "divergent": divergent,
        "T_res_gt_T_B": d.T_res > d.T_B,
    }
    print(" ".join(f"{k}={str(v).lower() if isinstance(v, bool) else repr(v)}"
                   for k, v in record.items()))
    if not d.T_res > d.T_B:
        print("error: resonance time is not longer than the Bloch period", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _parse_values(axis: str, text: str) -> list:
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(int(item) if axis == "L" else float(item))
        except ValueError as exc:
            raise ConfigError(f"bad scan value {item!r} for axis {axis}") from exc
    return values


def cmd_scan(cfg: RunConfig, axis: str, values_text: str, simulate: bool, jobs: int) -> int:
    if axis not in SCAN_AXES:
        raise ConfigError(f"unknown scan axis {axis!r}; valid axes: {', '.join(SCAN_AXES)}")
    if jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    values = _parse_values(axis, values_text)
    out = _out_dir(cfg)
    rows = scan_revival(cfg.params, axis, values, simulate=simulate, jobs=jobs)
    extra = {"scan_axis": axis, "scan_values": values, "scan_simulate": simulate}
    records = [r.record for r in rows if r.record is not None]
    if simulate and len({r.L for r in records}) > 1:
        table = scaling_collapse(records)
        extra["scaling_spread"] = table.max_spread
        print(f"rescaled revival-time spread across L: {table.max_spread:.4f}")
    path = write_table(
        out / f"{cfg.prefix}_scan_{axis}.csv", SCAN_COLUMNS, scan_rows_for_csv(rows),
        _header(cfg, "scan", **extra),
    )
    for r in rows:
        meas = "" if r.t_rev_meas is None else f"  measured {r.t_rev_meas:.6g}"
        print(f"{axis}={r.value!r}: predicted {r.t_rev_pred:.6g}{meas}  [{r.status}]")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_eigen(cfg: RunConfig) -> int:
    c = cfg.spin_couplings()
    exp = eigen_expansion(c["L"], c["m"], c["V_m"], c["U"])
    top = {int(i): rank + 1 for rank, i in enumerate(exp.largest(3))}
    out = _out_dir(cfg)
    rows = (
        (n, exp.eigenvalues[n], exp.coefficients[n], int(exp.bunch_labels[n]), top.get(n, 0))
        for n in range(exp.eigenvalues.size)
    )
    path = write_table(
        out / f"{cfg.prefix}_eigen.csv", ("index", "eigenvalue", "abs_c", "bunch", "top"), rows,
        _header(cfg, "eigen", **{f"spin.{k}": v for k, v in c.items()}),
    )
    print(f"{exp.n_bunches} bunches for L = {c['L']} (half filling M = {half_filling(c['L'])})")
    for n, rank in sorted(top.items(), key=lambda kv: kv[1]):
        lowest = "lowest in bunch" if exp.is_lowest_in_bunch(n) else "not lowest in bunch"
        print(f"  #{rank}: |c| = {exp.coefficients[n]:.6f}  E = {exp.eigenvalues[n]:.6f}  "
              f"bunch {exp.bunch_labels[n]} ({lowest})")
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="interband", description="Interband collapse-and-revival toolkit."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("simulate", "run the full and/or spin model and write time series"),
        ("predict", "print derived parameters and the predicted revival time"),
        ("eigen", "eigenbasis expansion of the all-down spin state"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("config")
        sp.add_argument("-o", "--output-dir", help="override output.directory")
    sp = sub.add_parser("scan", help="revival time along one parameter axis")
    sp.add_argument("config")
    sp.add_argument("--axis", required=True, help=f"one of {', '.join(SCAN_AXES)}")
    sp.add_argument("--values", required=True, help="comma-separated values")
    sp.add_argument("--simulate", action="store_true", help="also run the spin model")
    sp.add_argument("--jobs", type=int, default=1, help="parallel scan points")
    sp.add_argument("-o", "--output-dir", help="override output.directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = read_run_config(args.config)
        if args.output_dir:
            cfg = dataclasses.replace(cfg, directory=Path(args.output_dir))
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "predict":
            return cmd_predict(cfg)
        if args.command == "scan":
            return cmd_scan(cfg, args.axis, args.values, args.simulate, args.jobs)
        return cmd_eigen(cfg)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
