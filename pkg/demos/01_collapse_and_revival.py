"""Collapse and revival of interband oscillations at the reference working point.

Five bosons on five sites start in the lower band. Resonant tunnelling makes
the upper-band population oscillate at frequency 2|V_m|; interactions dephase
those oscillations and they come back after roughly 4L/U. The effective spin
chain reproduces this at a fraction of the cost.

    python demos/01_collapse_and_revival.py          # spin chain only, ~1 s
    python demos/01_collapse_and_revival.py --full   # adds the bosonic model, ~30 s
"""

import argparse
from pathlib import Path

from interband import (
    FIG1_PARAMS,
    derive_parameters,
    extract_revival,
    predict_revival_time,
    run_full,
    run_spin,
    write_timeseries,
)

parser = argparse.ArgumentParser()
parser.add_argument("--full", action="store_true", help="also propagate the bosonic model")
parser.add_argument("--out", default="demo_output", help="directory for CSV files")
args = parser.parse_args()
out = Path(args.out)
out.mkdir(exist_ok=True)

p = FIG1_PARAMS
d = derive_parameters(p)
print(f"Bloch period {d.T_B:.4f}, resonance time {d.T_res:.2f}, V_m = {d.V_m:.5f}, U = {d.U:.6f}")
print(f"predicted revival time {predict_revival_time(p):.1f}")

runs = {"spin": run_spin(p)}
if args.full:
    # sampled once per Bloch period; the micromotion inside a period is not recorded
    runs["full"] = run_full(p)

for tag, ts in runs.items():
    rec = extract_revival(ts, d, params=p)
    write_timeseries(out / f"fig1_{tag}.csv", ts)
    print(
        f"{tag:>4}: collapse at t = {rec.t_collapse:7.1f} (envelope down to {rec.collapse_depth:.2f}), "
        f"revival at t = {rec.t_rev_measured:7.1f}, ratio to prediction {rec.ratio:.3f}"
    )

# The measured revival sits about 10-15% after the prediction. The estimate
# keeps only the three magnon shells nearest half filling.
