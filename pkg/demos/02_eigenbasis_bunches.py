"""Why the revival happens: the spectrum seen from the all-down state.

For weak coupling the 2^L levels of the spin chain gather into L + 1 bunches,
one per magnon number. The all-down state mostly overlaps the lowest level of
the bunches near half filling, and the spacing of those few levels sets the
beat that produces the revival.
"""

from interband import eigen_expansion, magnon_ground_energy, magnon_spectrum
from interband.spin import frequency_shift, half_filling

L, V, U = 7, 1.0, 0.25
exp = eigen_expansion(L, 1, V, U)
print(f"L = {L}: {exp.n_bunches} bunches of sizes "
      f"{[int((exp.bunch_labels == b).sum()) for b in range(exp.n_bunches)]}")

for rank, n in enumerate(exp.largest(3), 1):
    where = "lowest" if exp.is_lowest_in_bunch(n) else "not lowest"
    print(f"  #{rank}: |c| = {exp.coefficients[n]:.4f} in bunch {exp.bunch_labels[n]} ({where} level)")

# Bunch bottoms against the free-magnon estimate.
spec = magnon_spectrum(L, V, U)
e0 = exp.bunch_minimum(0)
print("\n  M   numerical   magnon picture")
for M in range(L + 1):
    analytic = magnon_ground_energy(M, spec) - magnon_ground_energy(0, spec)
    print(f"  {M}   {exp.bunch_minimum(M) - e0:9.4f}   {analytic:9.4f}")

d_omega, d_omega_approx = frequency_shift(L, V, U)
print(f"\nhalf filling M = {half_filling(L)}; neighbouring-shell frequency difference "
      f"{d_omega:.5f} (small-U form {d_omega_approx:.5f})")
