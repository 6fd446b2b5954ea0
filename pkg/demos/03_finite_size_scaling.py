"""Revival time across sizes and interaction strengths.

The revival time grows linearly with L, so multiplying by 2 pi / L should
collapse different sizes onto one curve in g. We check that with the spin
chain and print the g-dependence next to the 1/g prediction.
"""

from interband import FIG1_PARAMS, scaling_collapse, scan_revival

records = []
for g in (0.05, 0.1, 0.2):
    rows = scan_revival(FIG1_PARAMS.replace(g=g), "L", [4, 5, 6], simulate=True, jobs=3)
    records += [r.record for r in rows if r.record is not None]

table = scaling_collapse(records)
print("   g   L   rescaled measured   rescaled predicted")
for g, L, meas, pred in table.rows:
    print(f"{g:5.2f}  {L}   {meas:12.1f}       {pred:12.1f}")
for g, spread in sorted(table.spread.items()):
    print(f"g = {g}: spread across sizes {spread:.3f}")

# Prediction-only scan near a zero of J_0: the effective interaction vanishes
# and the predicted revival time blows up.
rows = scan_revival(FIG1_PARAMS, "t_b", [0.121, 2.3 * FIG1_PARAMS.F, 2.404825557695773 * FIG1_PARAMS.F])
for r in rows:
    print(f"t_b = {r.value:8.4f}: predicted t_rev {r.t_rev_pred:.4g} [{r.status}]")
