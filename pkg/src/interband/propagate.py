"""Fixed-step RK4 propagation of i dpsi/dt = H(t) psi and observable sampling.

The integration runs in a diagonal gauge chosen to keep the generator small:
for the bosonic model the frame co-rotates with m F N_b, which removes the
large band-gap energies while keeping the generator exactly periodic in the
Bloch period; in both models the centre of the diagonal is removed as a global
phase. Band occupations are diagonal, so sampled values do not depend on the
frame, and the returned final state is transformed back.

When the generator is periodic with a period that divides the sampling
interval (or is time independent), the RK4 map over one sampling block is the
same for every block. For moderate dimensions that map is built once as a
dense matrix by stepping the identity, and the evolution becomes a sequence of
matrix-vector products; this is the same RK4 recursion evaluated in a
different order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError
from .fock import FockBasis
from .hamiltonian import BosonicHamiltonian, SpinHamiltonian
from .states import SpinSpace, StateVector

__all__ = [
    "TimeSeries",
    "evolve",
    "occupation_upper",
    "fraction_up",
    "default_dt",
    "rk4_step",
    "translation_sector",
    "RENORM_THRESHOLD",
    "ABORT_THRESHOLD",
]

log = logging.getLogger(__name__)

RENORM_THRESHOLD = 1e-8
ABORT_THRESHOLD = 1e-4
MAX_BLOCK_DIM = 4096
MAX_BLOCK_ENTRIES = 2**25


@dataclass
class TimeSeries:
    """Sampled observable: ``values[k]`` at ``times[k]``; ``meta`` is free-form."""

    times: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)
    checkpoints: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape or self.times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if self.times.size > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return self.times.size


def occupation_upper(psi: StateVector) -> float:
    """(1/N) sum_l <n^b_l>, the normalised upper-band population."""
    if not isinstance(psi.basis, FockBasis):
        raise TypeError(f"occupation_upper needs a Fock-basis state, got {psi.basis_tag}")
    return float(np.dot(np.abs(psi.amplitudes) ** 2, psi.basis.upper_band_fraction()))


def fraction_up(psi: StateVector) -> float:
    """(1/L) sum_l <sigma^up_l>, the fraction of up spins."""
    if not isinstance(psi.basis, SpinSpace):
        raise TypeError(f"fraction_up needs a spin-chain state, got {psi.basis_tag}")
    return float(np.dot(np.abs(psi.amplitudes) ** 2, psi.basis.upper_band_fraction()))


def default_dt(h) -> float:
    """T_B / 256 for the bosonic model; min(0.01, 0.04 / L) / |V_m| for the spin chain.

    The spin step shrinks with L because the spectral width grows with L. Both
    are reduced further if needed to stay at half the stability bound
    0.1 / ||H||_est; the bosonic step always divides T_B.
    """
    if isinstance(h, BosonicHamiltonian):
        cap = 0.05 / _frame_norm(h)
        return h.period / max(256, math.ceil(h.period / cap))
    if isinstance(h, SpinHamiltonian):
        if h.V_m == 0:
            raise ValueError("spin chain with V_m = 0 has no natural time step; pass dt")
        return min(min(0.01, 0.04 / h.L) / abs(h.V_m), 0.05 / _frame_norm(h))
    raise TypeError(f"no default step for {type(h).__name__}")


def _frame(h):
    """(terms, frame frequency, centre) of the generator actually integrated."""
    if isinstance(h, BosonicHamiltonian):
        omega = h.params.m * h.params.F
        terms = h.terms(frame_frequency=omega)
        n_upper = h.basis.states[:, h.basis.L :].sum(axis=1).astype(float)
    else:
        omega = 0.0
        terms = list(h.terms())
        n_upper = None
    grouped: dict[float, sp.csr_matrix] = {}
    for A, w in terms:
        grouped[w] = grouped[w] + A if w in grouped else A
    static = grouped.get(0.0, sp.csr_matrix((h.dimension, h.dimension)))
    diag = static.diagonal().real
    centre = 0.5 * (diag.min() + diag.max()) if diag.size else 0.0
    grouped[0.0] = (static - centre * sp.identity(h.dimension, format="csr")).tocsr()
    terms = [(A.tocsr(), w) for w, A in sorted(grouped.items()) if A.nnz]
    return terms, omega, centre, n_upper


def _frame_norm(h) -> float:
    terms = _frame(h)[0]
    if not terms:
        return 0.0
    bound = sum(abs(A) for A, _ in terms)
    return float(np.max(bound.sum(axis=1)))


class _Generator:
    """-i H(t) on the union sparsity pattern of all terms, one CSR per time."""

    def __init__(self, terms, dim):
        pattern = sum((abs(A) for A, _ in terms), sp.csr_matrix((dim, dim))).tocsr()
        pattern.sum_duplicates()
        pattern.sort_indices()
        self.indptr = pattern.indptr
        self.indices = pattern.indices
        self.shape = (dim, dim)
        keys = np.repeat(np.arange(dim), np.diff(pattern.indptr)) * dim + pattern.indices
        self.frequencies = []
        self.data = []
        for A, w in terms:
            A = A.tocoo()
            pos = np.searchsorted(keys, A.row.astype(np.int64) * dim + A.col)
            data = np.zeros(pattern.nnz, dtype=complex)
            np.add.at(data, pos, -1j * A.data)
            self.frequencies.append(w)
            self.data.append(data)
        self._cache_t = None
        self._cache = None

    def at(self, t: float) -> sp.csr_matrix:
        if t != self._cache_t:
            data = np.zeros_like(self.data[0])
            for w, d in zip(self.frequencies, self.data):
                data += d if w == 0.0 else np.exp(1j * w * t) * d
            self._cache = sp.csr_matrix((data, self.indices, self.indptr), shape=self.shape)
            self._cache_t = t
        return self._cache

    def __call__(self, t, y):
        return self.at(t) @ y


def rk4_step(rhs, t, y, dt):
    """One classic RK4 step for dy/dt = rhs(t, y); ``y`` may be a vector or matrix."""
    k = rhs(t, y)
    acc = y + (dt / 6.0) * k
    stage = y + (0.5 * dt) * k
    k = rhs(t + 0.5 * dt, stage)
    acc += (dt / 3.0) * k
    np.multiply(k, 0.5 * dt, out=stage)
    stage += y
    k = rhs(t + 0.5 * dt, stage)
    acc += (dt / 3.0) * k
    np.multiply(k, dt, out=stage)
    stage += y
    k = rhs(t + dt, stage)
    acc += (dt / 6.0) * k
    return acc


def _block_map(rhs, Y, dt, n_steps):
    Y = np.array(Y, dtype=complex)
    for n in range(n_steps):
        Y = rk4_step(rhs, n * dt, Y, dt)
    return Y


def _is_multiple(x, period, tol=1e-9):
    k = round(x / period)
    return k >= 1 and abs(x - k * period) <= tol * x


def translation_sector(basis) -> sp.csr_matrix:
    """Isometry onto translation-invariant vectors of ``basis``.

    Column ``c`` is the normalised sum of the basis states in one orbit of the
    cyclic shift. Both Hamiltonians commute with the shift, so RK4 maps this
    subspace into itself.
    """
    perm = basis.translation()
    label = np.arange(basis.dimension)
    cur = label.copy()
    for _ in range(basis.L - 1):
        cur = perm[cur]
        np.minimum(label, cur, out=label)
    reps, column, sizes = np.unique(label, return_inverse=True, return_counts=True)
    values = 1.0 / np.sqrt(sizes[column])
    return sp.csr_matrix(
        (values, (np.arange(basis.dimension), column)), shape=(basis.dimension, reps.size)
    )


def _in_sector(basis, y, tol=1e-12) -> bool:
    return bool(np.max(np.abs(y[basis.translation()] - y)) <= tol)


def evolve(
    h,
    psi0: StateVector,
    t_final: float,
    dt: float | None = None,
    sample_every: int = 1,
    observable: Callable[[StateVector], float] | None = None,
    method: str = "auto",
    checkpoint_every: int | None = None,
):
    """Integrate from t = 0 to ``t_final`` with classic RK4 at fixed ``dt``.

    The observable (upper-band occupation by default) is sampled every
    ``sample_every`` steps, including t = 0. ``method`` is ``"step"``,
    ``"block"`` or ``"auto"``; both give the same RK4 result up to rounding.
    With ``checkpoint_every = K`` the full state is kept every K samples in
    ``TimeSeries.checkpoints``.

    Returns ``(TimeSeries, final StateVector)``.
    """
    if psi0.basis != h.basis:
        raise ValueError(f"initial state on {psi0.basis_tag}, Hamiltonian on {h.basis.tag}")
    if not t_final > 0:
        raise ValueError(f"t_final must be > 0, got {t_final}")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    norm0 = psi0.norm()
    if abs(norm0 - 1.0) > 1e-10:
        raise ValueError(f"initial state must have unit norm, got {norm0}")
    if dt is None:
        dt = default_dt(h)

    terms, omega, centre, n_upper = _frame(h)
    norm_est = _frame_norm(h)
    limit = 0.1 / norm_est if norm_est > 0 else math.inf
    period = getattr(h, "period", None)
    if period is not None:
        limit = min(limit, period / 40)
    if dt > limit * (1 + 1e-12):
        raise ValueError(
            f"dt = {dt:.4g} exceeds the stability/resolution limit {limit:.4g} "
            f"(||H||_est = {norm_est:.4g}, period = {period})"
        )

    basis = h.basis
    weights = basis.upper_band_fraction()
    if observable is None:
        obs_name = "occupation_upper" if isinstance(basis, FockBasis) else "fraction_up"
    else:
        obs_name = getattr(observable, "__name__", "observable")

    n_steps = int(math.ceil(t_final / dt - 1e-9))
    n_samples = n_steps // sample_every
    block_time = sample_every * dt
    commensurate = period is None or _is_multiple(block_time, period)
    y0 = psi0.amplitudes.astype(complex)
    Q = None
    if commensurate and basis.L > 1 and _in_sector(basis, y0):
        Q = translation_sector(basis)
    width = Q.shape[1] if Q is not None else h.dimension
    can_block = (
        commensurate and width <= MAX_BLOCK_DIM and h.dimension * width <= MAX_BLOCK_ENTRIES
    )
    if method == "auto":
        method = "block" if can_block and width <= n_samples else "step"
    if method == "block" and not can_block:
        raise ValueError(
            "block propagation needs a sampling interval commensurate with the period "
            f"and a block of at most {MAX_BLOCK_DIM} columns"
        )
    if method not in ("block", "step"):
        raise ValueError(f"unknown method {method!r}")

    rhs = _Generator(terms, h.dimension)
    if method == "block":
        # work in sector coordinates c with y = Q c (Q = identity without symmetry)
        start = Q.toarray() if Q is not None else np.eye(h.dimension)
        if period is None:
            B = _block_map(rhs, start, dt, sample_every)
        else:
            per_period = int(round(period / dt))
            if abs(per_period * dt - period) > 1e-9 * period:
                raise ValueError("block propagation needs dt to divide the period")
            B = _block_map(rhs, start, dt, per_period)
        if Q is not None:
            B = Q.T @ B
        if period is not None:
            B = np.linalg.matrix_power(B, sample_every // per_period)
        if Q is not None:
            expand = lambda c: Q @ c  # noqa: E731
            reduced_weights = Q.multiply(Q).T @ weights
            y = Q.T @ y0
        else:
            expand = lambda c: c  # noqa: E731
            reduced_weights = weights
            y = y0.copy()
    else:
        expand = lambda c: c  # noqa: E731
        reduced_weights = weights
        y = y0.copy()

    def lab_state(v, t):
        v = v * np.exp(-1j * centre * t)
        if omega and n_upper is not None:
            v = v * np.exp(-1j * omega * n_upper * t)
        return v

    def sample(c, t):
        if observable is None:
            return float(np.dot(c.real**2 + c.imag**2, reduced_weights))
        return float(observable(StateVector(lab_state(expand(c), t), basis)))

    times = np.empty(n_samples + 1)
    values = np.empty(n_samples + 1)
    times[0] = 0.0
    values[0] = sample(y, 0.0)
    checkpoints = []
    if checkpoint_every:
        checkpoints.append((0.0, psi0.amplitudes.copy()))
    cumulative = 1.0
    max_drift = 0.0
    renorms = 0
    step = 0
    for k in range(1, n_samples + 1):
        if method == "block":
            y = B @ y
            step += sample_every
        else:
            for _ in range(sample_every):
                y = rk4_step(rhs, step * dt, y, dt)
                step += 1
        t = step * dt
        nrm = float(np.linalg.norm(y))
        if not np.isfinite(nrm):
            raise NumericalError(f"non-finite amplitudes at t = {t:.6g}; reduce dt (now {dt:.4g})")
        drift = abs(nrm - 1.0)
        max_drift = max(max_drift, drift)
        if drift > ABORT_THRESHOLD:
            raise NumericalError(
                f"norm drift {drift:.3g} at t = {t:.6g} exceeds {ABORT_THRESHOLD}; "
                f"reduce dt (now {dt:.4g})"
            )
        if drift > RENORM_THRESHOLD:
            cumulative *= nrm
            y = y / nrm
            renorms += 1
        times[k] = t
        values[k] = sample(y, t)
        if checkpoint_every and k % checkpoint_every == 0:
            checkpoints.append((t, lab_state(expand(y), t)))
    # steps past the last sample
    y = expand(y)
    while step < n_steps:
        y = rk4_step(rhs, step * dt, y, dt)
        step += 1
    t_end = step * dt
    nrm = float(np.linalg.norm(y))
    total_drift = abs(cumulative * nrm - 1.0)

    meta = {
        "observable": obs_name,
        "basis": basis.tag,
        "dt": dt,
        "sample_every": sample_every,
        "t_final": t_end,
        "method": method,
        "translation_sector": Q is not None and method == "block",
        "frame_frequency": omega,
        "norm_drift": total_drift,
        "max_norm_drift": max_drift,
        "renormalizations": renorms,
    }
    log.debug("evolve: %s", meta)
    ts = TimeSeries(times, values, meta, checkpoints)
    final = StateVector(lab_state(y, t_end), h.basis)
    return ts, final
