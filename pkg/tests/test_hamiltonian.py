import math

import numpy as np
import pytest

from interband import (
    FIG1_PARAMS,
    BosonicHamiltonian,
    FockBasis,
    SpinHamiltonian,
    apply_bosonic,
    apply_spin,
    ising_form_check,
    spin_hamiltonian_from_params,
)
from interband.errors import CapacityError
from interband.hamiltonian import ising_form_matrix
from interband.states import SpinSpace, StateVector
from oracles import SX, SZ, bosonic_matrix, site_op, spin_matrix, translation_matrix

RNG = np.random.default_rng(12345)


def random_vector(dim, rng=RNG):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def column_probe(h, t):
    dim = h.dimension
    cols = []
    for j in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[j] = 1.0
        cols.append(apply_bosonic(h, t, StateVector(e, h.basis)).amplitudes)
    return np.array(cols).T


def test_single_site_single_particle():
    p = FIG1_PARAMS.replace(N=1, L=1)
    h = BosonicHamiltonian(p)
    expected = np.array([[-p.Delta / 2, p.F * p.C0], [p.F * p.C0, p.Delta / 2]])
    for t in (0.0, 0.3, 17.0):
        assert np.allclose(column_probe(h, t), expected, atol=1e-15, rtol=0)


@pytest.mark.parametrize("t", [0.0, 0.137, 2.9, 1234.5])
def test_matches_literal_oracle(t):
    p = FIG1_PARAMS.replace(N=2, L=2, g=1.3)
    h = BosonicHamiltonian(p)
    assert np.max(np.abs(column_probe(h, t) - bosonic_matrix(p, t))) < 1e-12


def test_matches_literal_oracle_larger():
    p = FIG1_PARAMS.replace(N=3, L=3, g=0.7, t_a=0.2, t_b=0.3)
    h = BosonicHamiltonian(p)
    assert np.max(np.abs(h.matrix(0.41).toarray() - bosonic_matrix(p, 0.41))) < 1e-12


def test_hermitian_on_random_vectors():
    p = FIG1_PARAMS.replace(N=2, L=3, g=0.5)
    h = BosonicHamiltonian(p)
    for _ in range(10):
        t = RNG.uniform(0, 100)
        phi, psi = random_vector(h.dimension), random_vector(h.dimension)
        lhs = np.vdot(phi, h.apply(psi, t))
        rhs = np.vdot(h.apply(phi, t), psi)
        assert abs(lhs - rhs) < 1e-12
        assert abs(np.vdot(psi, h.apply(psi, t)).imag) < 1e-12


def test_particle_number_conserved():
    # every matrix element connects states with the same total N: the matrix lives on
    # one fixed-N basis, and each term moves particles between modes only
    p = FIG1_PARAMS.replace(N=3, L=3, g=1.0)
    h = BosonicHamiltonian(p)
    coo = h.matrix(0.7).tocoo()
    totals = h.basis.states.sum(axis=1)
    assert np.all(totals[coo.row] == 3) and np.all(totals[coo.col] == 3)
    # single-mode moves only: rows and columns differ by at most two particles moved
    diff = np.abs(h.basis.states[coo.row].astype(int) - h.basis.states[coo.col].astype(int)).sum(axis=1)
    assert set(np.unique(diff)) <= {0, 2, 4}


def test_periodic_in_bloch_period():
    h = BosonicHamiltonian(FIG1_PARAMS.replace(N=2, L=3))
    t = 0.3
    a = h.matrix(t).toarray()
    b = h.matrix(t + h.period).toarray()
    assert np.max(np.abs(a - b)) < 1e-14


def test_terms_reproduce_matrix():
    h = BosonicHamiltonian(FIG1_PARAMS.replace(N=2, L=3, g=0.4))
    t = 1.7
    for w in (0.0, 7.9804):
        total = sum(np.exp(1j * f * t) * A.toarray() for A, f in h.terms(w))
        n_upper = h.basis.states[:, 3:].sum(axis=1)
        expected = h.matrix(t).toarray()
        if w:
            # frame H' = e^{i w N_b t} H e^{-i w N_b t} - w N_b
            phase = np.exp(1j * w * n_upper * t)
            expected = phase[:, None] * expected * phase.conj()[None, :] - np.diag(w * n_upper)
        assert np.max(np.abs(total - expected)) < 1e-12


def test_dimension_mismatch():
    h = BosonicHamiltonian(FIG1_PARAMS.replace(N=2, L=2))
    other = StateVector(np.ones(FockBasis(2, 3).dimension) / 1.0, FockBasis(2, 3))
    with pytest.raises(ValueError):
        apply_bosonic(h, 0.0, other)
    with pytest.raises(ValueError):
        apply_bosonic(h, 0.0, np.ones(3))


def test_norm_estimate_bounds_spectrum():
    h = BosonicHamiltonian(FIG1_PARAMS.replace(N=2, L=3, g=1.0))
    for t in (0.0, 0.5):
        assert np.max(np.abs(np.linalg.eigvalsh(h.matrix(t).toarray()))) <= h.norm_estimate() + 1e-12


# spin chain


def test_spin_single_site_is_transverse_field():
    h = SpinHamiltonian(1, 1, 0.7, 0.3)
    assert np.allclose(h.dense(), 0.7 * SX)


def test_two_free_spins():
    h = SpinHamiltonian(2, 1, 0.5, 0.0)
    assert np.allclose(np.linalg.eigvalsh(h.dense()), [-1.0, 0.0, 0.0, 1.0])


@pytest.mark.parametrize("L, m", [(3, 1), (4, 2), (5, 3), (6, 2)])
def test_spin_matches_oracle(L, m):
    h = SpinHamiltonian(L, m, 1.0, 0.25)
    assert np.max(np.abs(h.dense() - spin_matrix(L, m, 1.0, 0.25))) == 0.0


def test_spin_real_symmetric():
    H = SpinHamiltonian(6, 1, -0.3, 0.1).dense()
    assert H.dtype.kind == "f"
    assert np.array_equal(H, H.T)


def test_spin_translation_invariant():
    L = 6
    h = SpinHamiltonian(L, 2, 0.8, 0.3)
    T = translation_matrix(L)
    psi = random_vector(2**L)
    assert np.linalg.norm(h.apply(T @ psi) - T @ h.apply(psi)) < 1e-12
    perm = SpinSpace(L).translation()
    assert np.array_equal(T[perm, np.arange(2**L)], np.ones(2**L))


def test_parity_commutes_with_ising_form():
    L = 5
    h = SpinHamiltonian(L, 1, 0.9, 0.4)
    ising = ising_form_matrix(h)
    P = np.eye(1)
    for _ in range(L):
        P = np.kron(P, SX)
    psi = random_vector(2**L)
    assert np.linalg.norm(ising @ (P @ psi) - P @ (ising @ psi)) < 1e-12
    # summed around the ring the linear sigma^z terms cancel, so P commutes with H too
    H = h.dense()
    assert np.linalg.norm(H @ (P @ psi) - P @ (H @ psi)) < 1e-12
    # the transverse field does not conserve magnetization
    Z = sum(site_op(SZ, l, L) for l in range(L))
    assert np.linalg.norm(H @ Z - Z @ H) > 0.1


@pytest.mark.parametrize("L, m, V, U", [(4, 1, 1.0, 0.25), (6, 2, 1.0, 0.25), (5, 1, -0.7, 0.3), (4, 1, 1.0, 0.0)])
def test_ising_form(L, m, V, U):
    assert ising_form_check(SpinHamiltonian(L, m, V, U)) < 1e-10


def test_ising_matrix_against_oracle():
    L, m, V, U = 4, 1, 0.6, 0.2
    oracle = sum(V * site_op(SX, l, L) - U / 4 * site_op(SZ, l, L) @ site_op(SZ, (l + m) % L, L) for l in range(L))
    assert np.max(np.abs(ising_form_matrix(SpinHamiltonian(L, m, V, U)) - oracle)) < 1e-15
    # constant offset between the forms is L U / 4
    H = SpinHamiltonian(L, m, V, U).dense()
    assert np.trace(H - oracle) / 2**L == pytest.approx(L * U / 4, abs=1e-14)


def test_apply_spin_and_errors():
    h = SpinHamiltonian(3, 1, 1.0, 0.25)
    psi = random_vector(8)
    assert np.allclose(apply_spin(h, psi).amplitudes, spin_matrix(3, 1, 1.0, 0.25) @ psi)
    with pytest.raises(ValueError):
        apply_spin(h, np.ones(4))
    with pytest.raises(ValueError):
        SpinHamiltonian(3, 0, 1.0, 0.1)
    with pytest.raises(CapacityError):
        SpinHamiltonian(15, 1, 1.0, 0.1).dense()


def test_spin_from_params():
    h = spin_hamiltonian_from_params(FIG1_PARAMS)
    assert (h.L, h.m) == (5, 1)
    assert h.V_m == pytest.approx(-0.0071818, rel=1e-4)
    assert h.U == pytest.approx(0.0036, rel=1e-3)
    assert math.isnan(h.period or math.nan)
