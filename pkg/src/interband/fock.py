"""Two-band bosonic Fock basis with combinatorial ranking.

A configuration is the concatenated occupation tuple
``(n^a_0, ..., n^a_{L-1}, n^b_0, ..., n^b_{L-1})``. Configurations are ordered
lexicographically *descending*, so index 0 holds all particles in mode a_0 and
the last index holds all particles in mode b_{L-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import CapacityError
from .states import StateVector

__all__ = [
    "FockState",
    "FockBasis",
    "enumerate_basis",
    "index_of",
    "state_at",
    "initial_state_lower_band",
    "lower_band_occupations",
    "basis_dimension",
    "DEFAULT_CAPACITY",
]

DEFAULT_CAPACITY = 5_000_000
ORDERING = "lex-desc"


@dataclass(frozen=True)
class FockState:
    occ_a: tuple[int, ...]
    occ_b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "occ_a", tuple(int(n) for n in self.occ_a))
        object.__setattr__(self, "occ_b", tuple(int(n) for n in self.occ_b))
        if len(self.occ_a) != len(self.occ_b):
            raise ValueError("occ_a and occ_b must have the same length")
        if any(n < 0 for n in self.occ_a + self.occ_b):
            raise ValueError("occupation numbers must be non-negative")

    @property
    def L(self) -> int:
        return len(self.occ_a)

    @property
    def N(self) -> int:
        return sum(self.occ_a) + sum(self.occ_b)

    def as_tuple(self) -> tuple[int, ...]:
        return self.occ_a + self.occ_b


def basis_dimension(N: int, L: int) -> int:
    """(N + 2L - 1)! / [N! (2L - 1)!]"""
    return comb(N + 2 * L - 1, N)


@lru_cache(maxsize=64)
def _compositions(n: int, k: int) -> np.ndarray:
    # all weak compositions of n into k parts, descending lexicographic
    if k == 1:
        return np.array([[n]], dtype=np.int16)
    blocks = []
    for first in range(n, -1, -1):
        rest = _compositions(n - first, k - 1)
        head = np.full((rest.shape[0], 1), first, dtype=np.int16)
        blocks.append(np.hstack([head, rest]))
    out = np.vstack(blocks)
    out.flags.writeable = False
    return out


class FockBasis:
    """All configurations of ``N`` bosons on ``L`` sites times two bands.

    Immutable after construction. ``states`` is a read-only ``(dimension, 2L)``
    integer array in canonical order.
    """

    ordering = ORDERING

    def __init__(self, N: int, L: int, capacity: int = DEFAULT_CAPACITY):
        if N < 1 or L < 1:
            raise ValueError(f"need N >= 1 and L >= 1, got N={N}, L={L}")
        dim = basis_dimension(N, L)
        if dim > capacity:
            raise CapacityError(
                f"Fock basis for N={N}, L={L} has dimension {dim}, above the cap of {capacity}"
            )
        self.N = int(N)
        self.L = int(L)
        self.dimension = dim
        self.n_modes = 2 * self.L
        self.states = _compositions(self.N, self.n_modes)
        # binom[a, p] = C(a, p), clipped to stay inside int64
        a_max = self.N + self.n_modes
        self._binom = np.array(
            [[min(comb(a, p), 2**62) for p in range(self.n_modes)] for a in range(a_max + 1)],
            dtype=np.int64,
        )

    def __repr__(self):
        return f"FockBasis(N={self.N}, L={self.L}, dimension={self.dimension})"

    def __eq__(self, other):
        return isinstance(other, FockBasis) and (self.N, self.L) == (other.N, other.L)

    def __hash__(self):
        return hash(("fock", self.N, self.L))

    @property
    def tag(self) -> str:
        return f"fock:N={self.N},L={self.L}"

    def metadata(self) -> dict:
        return {
            "basis": "fock",
            "N": self.N,
            "L": self.L,
            "dimension": self.dimension,
            "ordering": self.ordering,
        }

    def rank(self, configs: np.ndarray) -> np.ndarray:
        """Vectorised rank of an ``(n, 2L)`` array of configurations."""
        configs = np.asarray(configs, dtype=np.int64)
        if configs.ndim != 2 or configs.shape[1] != self.n_modes:
            raise ValueError(f"configurations must have shape (n, {self.n_modes})")
        totals = configs.sum(axis=1)
        if np.any(totals != self.N) or np.any(configs < 0):
            raise ValueError(f"configurations must hold exactly N={self.N} particles")
        before = np.cumsum(configs, axis=1) - configs
        remaining = self.N - before
        parts_after = self.n_modes - 1 - np.arange(self.n_modes)
        # states with a larger value at position i (same prefix) come first:
        # their count is C(remaining - s_i - 1 + p, p) by the hockey-stick identity
        a = remaining - configs - 1 + parts_after
        a = a[:, :-1]
        p = np.broadcast_to(parts_after[:-1], a.shape)
        valid = configs[:, :-1] < remaining[:, :-1]
        counts = np.where(valid, self._binom[np.clip(a, 0, None), p], 0)
        return counts.sum(axis=1)

    def index_of(self, state: FockState | tuple | list | np.ndarray) -> int:
        config = _as_config(state)
        if len(config) != self.n_modes:
            raise ValueError(f"state has {len(config) // 2} sites, basis has L={self.L}")
        if sum(config) != self.N:
            raise ValueError(f"state holds {sum(config)} particles, basis has N={self.N}")
        remaining = self.N
        idx = 0
        for i, s in enumerate(config[:-1]):
            if s < 0:
                raise ValueError("occupation numbers must be non-negative")
            p = self.n_modes - 1 - i
            if s < remaining:
                idx += comb(remaining - s - 1 + p, p)
            remaining -= s
        return idx

    def state_at(self, idx: int) -> FockState:
        if not 0 <= idx < self.dimension:
            raise IndexError(f"index {idx} out of range for dimension {self.dimension}")
        row = self.states[idx]
        return FockState(tuple(row[: self.L]), tuple(row[self.L :]))

    def upper_band_fraction(self) -> np.ndarray:
        """Diagonal of (1/N) sum_l n^b_l in this basis."""
        return self.states[:, self.L :].sum(axis=1) / self.N

    def translation(self) -> np.ndarray:
        """Index map of the cyclic shift l -> l + 1 applied to both bands."""
        L = self.L
        shifted = np.concatenate(
            [np.roll(self.states[:, :L], 1, axis=1), np.roll(self.states[:, L:], 1, axis=1)],
            axis=1,
        )
        return self.rank(shifted)


def _as_config(state) -> tuple[int, ...]:
    if isinstance(state, FockState):
        return state.as_tuple()
    return tuple(int(n) for n in np.asarray(state).ravel())


def enumerate_basis(N: int, L: int, capacity: int = DEFAULT_CAPACITY) -> FockBasis:
    return FockBasis(N, L, capacity=capacity)


def index_of(basis: FockBasis, s: FockState) -> int:
    return basis.index_of(s)


def state_at(basis: FockBasis, idx: int) -> FockState:
    return basis.state_at(idx)


def lower_band_occupations(N: int, L: int) -> tuple[int, ...]:
    """As uniform as possible, extra particles on the leftmost sites."""
    q, r = divmod(N, L)
    return tuple(q + 1 if l < r else q for l in range(L))


def initial_state_lower_band(basis: FockBasis) -> StateVector:
    """All particles in band a, spread uniformly over the sites.

    When N is not a multiple of L the leftover N mod L particles sit one each on
    the first sites; this left-aligned rule is a convention, not physics.
    """
    occ_a = lower_band_occupations(basis.N, basis.L)
    state = FockState(occ_a, (0,) * basis.L)
    amplitudes = np.zeros(basis.dimension, dtype=complex)
    amplitudes[basis.index_of(state)] = 1.0
    return StateVector(amplitudes, basis)
