"""Hamiltonians of the two-band lattice and of the effective spin chain.

The bosonic Hamiltonian is taken in the interaction picture with respect to the
tilt: the site energies lF disappear and nearest-neighbour hopping picks up a
phase e^{iFt}, with periodic boundary conditions on the ring. It is stored as

    H(t) = H_static + e^{iFt} H_+ + e^{-iFt} H_+^dagger,

    H_+ = -(t_a / 2) sum_l a^dag_{l+1} a_l + (t_b / 2) sum_l b^dag_{l+1} b_l,

so evaluating H(t) needs two phases and no rebuilding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError
from .fock import FockBasis
from .params import ModelParams, derive_parameters
from .states import SpinSpace, StateVector

__all__ = [
    "BosonicHamiltonian",
    "SpinHamiltonian",
    "apply_bosonic",
    "apply_spin",
    "spin_hamiltonian_from_params",
    "ising_form_check",
    "ising_form_matrix",
    "DENSE_SPIN_LIMIT",
]

DENSE_SPIN_LIMIT = 14


def _transfer(basis: FockBasis, src: int, dst: int, count: int = 1):
    """COO triplets of (c^dag_dst)^count (c_src)^count between basis states."""
    states = basis.states
    n_src = states[:, src].astype(np.int64)
    cols = np.nonzero(n_src >= count)[0]
    new = states[cols].astype(np.int64)
    n_s = new[:, src].copy()
    n_d = new[:, dst].copy()
    new[:, src] -= count
    new[:, dst] += count
    amp = np.ones(len(cols))
    for j in range(count):
        amp *= np.sqrt((n_s - j) * (n_d + 1 + j))
    rows = basis.rank(new)
    return rows, cols, amp


def _coo(basis: FockBasis, triplets) -> sp.csr_matrix:
    dim = basis.dimension
    if not triplets:
        return sp.csr_matrix((dim, dim))
    rows = np.concatenate([t[0] for t in triplets])
    cols = np.concatenate([t[1] for t in triplets])
    vals = np.concatenate([t[2] for t in triplets])
    out = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    out.sum_duplicates()
    return out


@dataclass
class BosonicHamiltonian:
    """Sparse two-band Bose-Hubbard Hamiltonian on a periodic ring.

    Matrix blocks are assembled once from occupation arithmetic on the basis
    table. ``coupling`` is the interband part split by how much it raises the
    upper-band particle number (+1 for b^dag a, +2 for b^dag b^dag a a); the
    propagator uses that split to move into a frame co-rotating with the
    resonance.
    """

    params: ModelParams
    basis: FockBasis | None = None
    diagonal: np.ndarray = field(init=False, repr=False)
    coupling: dict = field(init=False, repr=False)
    hop_a: sp.csr_matrix = field(init=False, repr=False)
    hop_b: sp.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        p = self.params
        if self.basis is None:
            self.basis = FockBasis(p.N, p.L)
        b = self.basis
        if (b.N, b.L) != (p.N, p.L):
            raise ValueError(f"basis {b!r} does not match params N={p.N}, L={p.L}")
        L = b.L
        na = b.states[:, :L].astype(float)
        nb = b.states[:, L:].astype(float)
        self.diagonal = (
            -0.5 * p.Delta * na.sum(axis=1)
            + 0.5 * p.Delta * nb.sum(axis=1)
            + 0.5 * p.g * p.W_a * (na * (na - 1)).sum(axis=1)
            + 0.5 * p.g * p.W_b * (nb * (nb - 1)).sum(axis=1)
            + 2.0 * p.g * p.W_x * (na * nb).sum(axis=1)
        )
        single = _coo(b, [_transfer(b, l, L + l) for l in range(L)]) * (p.F * p.C0)
        pair = _coo(b, [_transfer(b, l, L + l, count=2) for l in range(L)]) * (0.5 * p.g * p.W_x)
        self.coupling = {1: single.tocsr(), 2: pair.tocsr()}
        if L > 1:
            self.hop_a = _coo(b, [_transfer(b, l, (l + 1) % L) for l in range(L)])
            self.hop_b = _coo(b, [_transfer(b, L + l, L + (l + 1) % L) for l in range(L)])
        else:
            # a single site has no distinct neighbour to hop to
            self.hop_a = sp.csr_matrix((b.dimension, b.dimension))
            self.hop_b = sp.csr_matrix((b.dimension, b.dimension))
        self._static = None
        self._raising = None

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.params.F

    @property
    def static(self) -> sp.csr_matrix:
        if self._static is None:
            off = self.coupling[1] + self.coupling[2]
            self._static = (sp.diags(self.diagonal) + off + off.T).tocsr()
        return self._static

    @property
    def raising(self) -> sp.csr_matrix:
        """H_+, the part of H(t) carrying the phase e^{iFt}."""
        if self._raising is None:
            p = self.params
            self._raising = (-0.5 * p.t_a * self.hop_a + 0.5 * p.t_b * self.hop_b).tocsr()
        return self._raising

    def terms(self, frame_frequency: float = 0.0) -> list[tuple[sp.csr_matrix, float]]:
        """``H(t) = sum_k e^{i w_k t} A_k`` as a list of ``(A_k, w_k)``.

        With ``frame_frequency = w`` the terms describe the Hamiltonian seen in
        the frame rotating with ``w * N_b``: a state there is
        ``exp(i w N_b t) psi(t)``. Band occupations are unchanged by this.
        """
        F = self.params.F
        w = float(frame_frequency)
        raising = self.raising
        if w == 0.0:
            return [(self.static, 0.0), (raising, F), (raising.T.tocsr(), -F)]
        n_upper = self.basis.states[:, self.basis.L :].sum(axis=1)
        out = [(sp.diags(self.diagonal - w * n_upper).tocsr(), 0.0)]
        for dn, block in self.coupling.items():
            out.append((block, dn * w))
            out.append((block.T.tocsr(), -dn * w))
        out.append((raising, F))
        out.append((raising.T.tocsr(), -F))
        return [(A, f) for A, f in out if A.nnz]

    def matrix(self, t: float) -> sp.csr_matrix:
        phase = np.exp(1j * self.params.F * t)
        return (self.static + phase * self.raising + np.conj(phase) * self.raising.T).tocsr()

    def apply(self, psi: np.ndarray, t: float) -> np.ndarray:
        phase = np.exp(1j * self.params.F * t)
        r = self.raising
        return self.static @ psi + phase * (r @ psi) + np.conj(phase) * (r.T @ psi)

    def norm_estimate(self) -> float:
        """Max absolute row sum of |H_static| + 2|H_+| (bounds ||H(t)|| for all t)."""
        bound = abs(self.static) + abs(self.raising) + abs(self.raising.T)
        return float(np.max(bound.sum(axis=1))) if self.dimension else 0.0


def apply_bosonic(h: BosonicHamiltonian, t: float, psi: StateVector | np.ndarray) -> StateVector:
    """H(t) psi for the two-band Hamiltonian."""
    amplitudes = _amplitudes(psi, h.basis)
    return StateVector(h.apply(amplitudes, t), h.basis)


def _amplitudes(psi, basis) -> np.ndarray:
    if isinstance(psi, StateVector):
        if psi.basis != basis:
            raise ValueError(f"state lives on {psi.basis_tag}, Hamiltonian on {basis.tag}")
        return psi.amplitudes
    arr = np.asarray(psi)
    if arr.shape != (basis.dimension,):
        raise ValueError(f"vector of shape {arr.shape} does not match dimension {basis.dimension}")
    return arr


class SpinHamiltonian:
    """sum_l ( V_m sigma^x_l + U sigma^up_l sigma^down_{l+m} ), sites mod L.

    Real symmetric in the sigma^z product basis; bit ``k`` of a basis index is
    site ``k``.
    """

    period = None

    def __init__(self, L: int, m: int, V_m: float, U: float):
        if m < 1:
            raise ValueError(f"coupling distance m must be >= 1, got {m}")
        self.space = SpinSpace(L)
        self.L = int(L)
        self.m = int(m)
        self.V_m = float(V_m)
        self.U = float(U)
        dim = self.space.dimension
        idx = np.arange(dim, dtype=np.int64)
        bits = [(idx >> k) & 1 for k in range(L)]
        diag = np.zeros(dim)
        for l in range(L):
            diag += bits[l] * (1 - bits[(l + self.m) % L])
        self.diagonal = self.U * diag
        rows = np.concatenate([idx ^ (1 << l) for l in range(L)])
        cols = np.tile(idx, L)
        flips = sp.csr_matrix((np.full(len(rows), self.V_m), (rows, cols)), shape=(dim, dim))
        self._matrix = (flips + sp.diags(self.diagonal)).tocsr()

    def __repr__(self):
        return f"SpinHamiltonian(L={self.L}, m={self.m}, V_m={self.V_m}, U={self.U})"

    @property
    def basis(self) -> SpinSpace:
        return self.space

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def matrix(self, t: float | None = None) -> sp.csr_matrix:
        return self._matrix

    def dense(self) -> np.ndarray:
        if self.L > DENSE_SPIN_LIMIT:
            raise CapacityError(
                f"dense spin Hamiltonian needs L <= {DENSE_SPIN_LIMIT}, got L={self.L}"
            )
        return self._matrix.toarray()

    def terms(self, frame_frequency: float = 0.0):
        return [(self._matrix, 0.0)]

    def apply(self, psi: np.ndarray, t: float | None = None) -> np.ndarray:
        return self._matrix @ psi

    def norm_estimate(self) -> float:
        return float(np.max(abs(self._matrix).sum(axis=1)))


def apply_spin(h: SpinHamiltonian, psi: StateVector | np.ndarray) -> StateVector:
    amplitudes = _amplitudes(psi, h.space)
    return StateVector(h.apply(amplitudes), h.space)


def spin_hamiltonian_from_params(p: ModelParams) -> SpinHamiltonian:
    d = derive_parameters(p)
    return SpinHamiltonian(p.L, p.m, d.V_m, d.U)


def ising_form_matrix(h: SpinHamiltonian) -> np.ndarray:
    """Dense sum_l ( V_m sigma^x_l - (U/4) sigma^z_l sigma^z_{l+m} ), no constant."""
    if h.L > DENSE_SPIN_LIMIT:
        raise CapacityError(f"dense Ising form needs L <= {DENSE_SPIN_LIMIT}, got L={h.L}")
    idx = np.arange(h.dimension, dtype=np.int64)
    z = [2 * ((idx >> k) & 1) - 1 for k in range(h.L)]  # +1 for up
    diag = np.zeros(h.dimension)
    for l in range(h.L):
        diag -= 0.25 * h.U * z[l] * z[(l + h.m) % h.L]
    mat = np.diag(diag)
    for l in range(h.L):
        mat[idx ^ (1 << l), idx] += h.V_m
    return mat


def ising_form_check(h: SpinHamiltonian) -> float:
    """Largest eigenvalue difference between H and its Ising form plus constant.

    The constant is fixed by matching traces; the two spectra coincide.
    """
    H = h.dense()
    ising = ising_form_matrix(h)
    const = (np.trace(H) - np.trace(ising)) / h.dimension
    e1 = np.linalg.eigvalsh(H)
    e2 = np.linalg.eigvalsh(ising) + const
    return float(np.max(np.abs(e1 - e2)))
