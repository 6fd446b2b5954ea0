"""State vectors and the spin-1/2 chain space.

Spin configurations are integers whose bit ``k`` is the spin on site ``k``
(little-endian): 0 is down (particle in the lower band), 1 is up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = ["SpinSpace", "StateVector", "all_down_state", "MAX_SPIN_SITES"]

MAX_SPIN_SITES = 24


@dataclass(frozen=True)
class SpinSpace:
    L: int

    def __post_init__(self):
        if not 1 <= self.L <= MAX_SPIN_SITES:
            raise ValueError(f"spin chain length must be in 1..{MAX_SPIN_SITES}, got {self.L}")

    @property
    def dimension(self) -> int:
        return 1 << self.L

    @property
    def tag(self) -> str:
        return f"spin:L={self.L}"

    def metadata(self) -> dict:
        return {"basis": "spin", "L": self.L, "dimension": self.dimension, "bit_order": "little"}

    def up_counts(self) -> np.ndarray:
        idx = np.arange(self.dimension, dtype=np.int64)
        counts = np.zeros(self.dimension, dtype=np.int64)
        for k in range(self.L):
            counts += (idx >> k) & 1
        return counts

    def upper_band_fraction(self) -> np.ndarray:
        """Diagonal of (1/L) sum_l sigma^up_l."""
        return self.up_counts() / self.L

    def translation(self) -> np.ndarray:
        """Index map of the cyclic shift l -> l + 1 (bit rotation)."""
        idx = np.arange(self.dimension, dtype=np.int64)
        return ((idx << 1) | (idx >> (self.L - 1))) & (self.dimension - 1)


@dataclass
class StateVector:
    """Complex amplitudes over a ``FockBasis`` or ``SpinSpace``."""

    amplitudes: np.ndarray
    basis: Any

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise ValueError(
                f"amplitude vector of shape {self.amplitudes.shape} does not match "
                f"basis dimension {self.basis.dimension}"
            )

    @property
    def basis_tag(self) -> str:
        return self.basis.tag

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy(), self.basis)


def all_down_state(L: int) -> StateVector:
    space = SpinSpace(L)
    amplitudes = np.zeros(space.dimension, dtype=complex)
    amplitudes[0] = 1.0
    return StateVector(amplitudes, space)
