"""Analytic side of the effective spin chain: magnons and revival time.

The chain sum_l ( V_m sigma^x_l + U sigma^up_l sigma^down_{l+m} ) is a transverse
field Ising model. Its elementary excitations (magnons) have the dispersion

    eps(k) = 2 V_m sqrt(1 - (U / 2V_m) cos k + (U / 4V_m)^2) ~ 2 V_m - (U/2) cos k,

and momenta are quantised naively as k_j = 2 pi j / L, j = 1..L. Many-magnon
ground energies fill the weak-coupling cosine band from its minimum upwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j
from .errors import CapacityError, NumericalError
from .hamiltonian import DENSE_SPIN_LIMIT, SpinHamiltonian
from .params import ModelParams

__all__ = [
    "MagnonSpectrum",
    "EigenExpansion",
    "BunchingError",
    "dispersion",
    "magnon_spectrum",
    "magnon_ground_energy",
    "half_filling",
    "frequency_shift",
    "predict_revival_time",
    "revival_time_from_interaction",
    "eigen_expansion",
    "bogolyubov_angle",
]


class BunchingError(NumericalError):
    """Eigenvalues did not separate into L + 1 magnon-number bunches."""


def dispersion(k, V_m: float, U: float, approx: bool = False):
    """Single-magnon energy; ``approx=True`` gives the weak-coupling cosine."""
    if V_m == 0:
        raise ValueError("V_m must be non-zero")
    k = np.asarray(k, dtype=float)
    if approx:
        out = 2.0 * V_m - 0.5 * U * np.cos(k)
    else:
        r = U / (4.0 * V_m)
        out = 2.0 * V_m * np.sqrt(1.0 - 2.0 * r * np.cos(k) + r * r)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MagnonSpectrum:
    L: int
    V_m: float
    U: float
    momenta: np.ndarray
    single_magnon_energies: np.ndarray
    filling_order: tuple[int, ...]

    def momentum(self, j: int) -> float:
        return 2.0 * math.pi * j / self.L

    def shell(self, j: int) -> int:
        """Distance of j from k = 0 on the ring; equal shells have equal cos k."""
        j %= self.L
        return min(j, self.L - j)


def magnon_spectrum(L: int, V_m: float, U: float) -> MagnonSpectrum:
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    js = np.arange(1, L + 1)
    momenta = 2.0 * np.pi * js / L
    # descending cos k == ascending distance from k = 0; ties go to the smaller j
    order = tuple(sorted(range(1, L + 1), key=lambda j: (min(j % L, L - j % L), j)))
    return MagnonSpectrum(
        L=L,
        V_m=V_m,
        U=U,
        momenta=momenta,
        single_magnon_energies=dispersion(momenta, V_m, U),
        filling_order=order,
    )


def magnon_ground_energy(M: int, spec: MagnonSpectrum) -> float:
    """Lowest M-magnon energy in the weak-coupling (cosine) dispersion."""
    if not 0 <= M <= spec.L:
        raise ValueError(f"magnon number must be in 0..{spec.L}, got {M}")
    return math.fsum(
        2.0 * spec.V_m - 0.5 * spec.U * math.cos(spec.momentum(j))
        for j in spec.filling_order[:M]
    )


def half_filling(L: int) -> int:
    """M = L/2 for even L, (L-1)/2 for odd L."""
    return L // 2


def frequency_shift(L: int, V_m: float, U: float) -> tuple[float, float]:
    """Second difference E_{M+1} + E_{M-1} - 2 E_M of the magnon ground energies.

    Returns ``(exact, approx)`` with ``exact = -(U/2)(cos k_next - cos k_M)``, where
    ``k_M`` is the M-th filled momentum and ``k_next`` the next filled momentum
    lying in a higher shell (a +-k partner of ``k_M`` would give exactly zero),
    and ``approx = pi U / L`` from linearising the cosine at its zero.
    """
    if L < 3:
        raise ValueError(f"frequency shift needs L >= 3, got {L}")
    spec = magnon_spectrum(L, V_m, U)
    M = half_filling(L)
    order = spec.filling_order
    j_m = order[M - 1]
    j_next = next(j for j in order[M:] if spec.shell(j) != spec.shell(j_m))
    exact = -0.5 * U * (math.cos(spec.momentum(j_next)) - math.cos(spec.momentum(j_m)))
    approx = math.pi * U / L
    return exact, approx


def revival_time_from_interaction(L: int, U: float) -> float:
    """4 L / U; infinite when the effective interaction vanishes."""
    return math.inf if U == 0 else 4.0 * L / U


def predict_revival_time(p: ModelParams) -> float:
    """Revival time (L / 2 pi) * 4 pi / (g W_x J_0^2(x_a) J_0^2(x_b)).

    A vanishing denominator (no interaction, or a Bessel zero) returns
    ``math.inf`` so that scans can carry the divergence along.
    """
    x_a = p.t_a / p.F
    x_b = p.t_b / p.F
    denom = p.g * p.W_x * bessel_j(0, x_a) ** 2 * bessel_j(0, x_b) ** 2
    if denom == 0:
        return math.inf
    return (p.L / (2.0 * math.pi)) * (4.0 * math.pi / denom)


@dataclass(frozen=True)
class EigenExpansion:
    """Spectrum of the spin chain and overlaps with the all-down state."""

    L: int
    eigenvalues: np.ndarray
    coefficients: np.ndarray
    bunch_labels: np.ndarray

    @property
    def n_bunches(self) -> int:
        return int(self.bunch_labels.max()) + 1

    def largest(self, count: int = 3) -> np.ndarray:
        """Indices of the ``count`` largest |c_n|, biggest first."""
        return np.argsort(-self.coefficients, kind="stable")[:count]

    def bunch_minimum(self, label: int) -> float:
        return float(self.eigenvalues[self.bunch_labels == label].min())

    def is_lowest_in_bunch(self, index: int, tol: float = 1e-9) -> bool:
        label = self.bunch_labels[index]
        scale = max(1.0, float(np.abs(self.eigenvalues).max()))
        return bool(self.eigenvalues[index] - self.bunch_minimum(label) <= tol * scale)


def _cluster(eigenvalues: np.ndarray, gap: float) -> np.ndarray:
    jumps = np.diff(eigenvalues) > gap
    return np.concatenate([[0], np.cumsum(jumps)]).astype(int)


def eigen_expansion(L: int, m: int, V_m: float, U: float, strict: bool = True) -> EigenExpansion:
    """Dense eigenbasis expansion of |down ... down> for the spin chain.

    Eigenvalues are grouped into bunches wherever consecutive levels are more
    than |V_m| apart; bunches are labelled 0.. by ascending energy. With
    ``strict`` anything other than L + 1 bunches raises ``BunchingError``
    (the interaction is then too strong for a magnon-number picture).
    """
    if L > DENSE_SPIN_LIMIT:
        raise CapacityError(f"eigen expansion needs L <= {DENSE_SPIN_LIMIT}, got L={L}")
    h = SpinHamiltonian(L, m, V_m, U)
    energies, vectors = np.linalg.eigh(h.dense())
    coefficients = np.abs(vectors[0, :])
    labels = _cluster(energies, abs(V_m))
    found = int(labels.max()) + 1
    if strict and found != L + 1:
        raise BunchingError(
            f"found {found} eigenvalue bunches, expected {L + 1} "
            f"(U/V_m = {U / V_m:.3g} is too large for the weak-coupling picture)"
        )
    return EigenExpansion(L=L, eigenvalues=energies, coefficients=coefficients, bunch_labels=labels)


def bogolyubov_angle(k: float, V_m: float, U: float) -> float:
    """theta_k with tan theta_k = sin k / (cos k - 4 V_m / U).

    The branch is the one continuous in U that vanishes as U -> 0+, so
    theta_k = 0 wherever sin k = 0. U = 0 returns 0.
    """
    if U == 0:
        return 0.0
    s = math.sin(k)
    c = math.cos(k) - 4.0 * V_m / U
    if c == 0:
        return math.copysign(math.pi / 2, s)
    return math.atan(s / c)
