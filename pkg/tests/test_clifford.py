"""Clifford tableaus: sampling uniformity, dense conversion, enumeration."""

import numpy as np
import pytest
from scipy import stats

from pru_lab import CapacityError, CliffordElement, DomainError, enumerate_cliffords, sample_clifford
from pru_lab.clifford import _canonical_key, symplectic_form, symplectic_group_order

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS_1Q = [X, Y, Z]


def pauli_on(n, qubit, P):
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        out = np.kron(out, P if q == qubit else np.eye(2))
    return out


def is_signed_pauli(M, n):
    for qubits in range(4**n):
        ops = np.array([[1.0 + 0j]])
        rem = qubits
        for _ in range(n):
            ops = np.kron(ops, [np.eye(2), X, Y, Z][rem % 4])
            rem //= 4
        for sign in (1, -1):
            if np.allclose(M, sign * ops, atol=1e-9):
                return True
    return False


def test_identity_tableau_is_identity():
    for n in (1, 2, 3):
        U = CliffordElement.identity(n).to_dense()
        assert np.allclose(U.entries, np.eye(2**n))


def test_tableau_validation():
    bad = np.eye(4, dtype=np.uint8)
    bad[0, 1] = 1  # breaks the symplectic form
    with pytest.raises(DomainError):
        CliffordElement(2, bad, np.zeros(4, dtype=np.uint8))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sampled_clifford_dense_is_unitary_and_conjugates_paulis(n):
    omega = symplectic_form(n)
    for seed in range(12):
        c = sample_clifford(n, seed)
        S = c.symplectic
        assert np.array_equal((S.T @ omega @ S) % 2, omega)
        U = c.to_dense()
        assert U.is_unitary(1e-10)
        # conjugation of every generator matches the tableau column exactly
        for j in range(2 * n):
            gen = pauli_on(n, j % n, X if j < n else Z)
            img = U.entries @ gen @ U.entries.conj().T
            assert np.abs(img - c.generator_image(j)).max() < 1e-9


def test_symplectic_invariant_many_samples():
    omega = symplectic_form(2)
    for seed in range(1000):
        S = sample_clifford(2, seed).symplectic
        assert np.array_equal((S.T @ omega @ S) % 2, omega)


def test_seed_determinism():
    a = sample_clifford(3, 42)
    b = sample_clifford(3, 42)
    assert np.array_equal(a.symplectic, b.symplectic)
    assert np.array_equal(a.phase, b.phase)


def test_group_orders():
    assert symplectic_group_order(1) == 6
    assert symplectic_group_order(2) == 720


def test_enumerate_single_qubit():
    ops = enumerate_cliffords(1)
    assert len(ops) == 24
    for op in ops:
        for P in PAULIS_1Q:
            img = op.entries @ P @ op.entries.conj().T
            assert is_signed_pauli(img, 1)


def test_enumeration_uniformity_chi2():
    ops = enumerate_cliffords(1)
    keys = {_canonical_key(op.entries): i for i, op in enumerate(ops)}
    counts = np.zeros(24)
    N = 10000
    for seed in range(N):
        U = sample_clifford(1, seed).to_dense()
        counts[keys[_canonical_key(U.entries)]] += 1
    expected = N / 24
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < stats.chi2.ppf(0.99, df=23)


def test_enumerate_two_qubit_requires_flag():
    with pytest.raises(CapacityError):
        enumerate_cliffords(2)
    with pytest.raises(CapacityError):
        enumerate_cliffords(3, allow_two_qubit=True)


@pytest.mark.slow
def test_enumerate_two_qubit_count():
    assert len(enumerate_cliffords(2, allow_two_qubit=True)) == 11520


def test_average_xx_matches_haar_two_twirl():
    # exact Haar 2-twirl of X(x)X: project onto span{I, SWAP}
    ops = enumerate_cliffords(1)
    XX = np.kron(X, X)
    avg = np.zeros((4, 4), dtype=complex)
    for op in ops:
        U2 = np.kron(op.entries, op.entries)
        avg += U2 @ XX @ U2.conj().T
    avg /= len(ops)
    swap = np.zeros((4, 4))
    swap[0, 0] = swap[3, 3] = swap[1, 2] = swap[2, 1] = 1
    target = -np.eye(4) / 3 + 2 * swap / 3  # Gram solve of (0, Tr[XX swap]=2)
    assert np.abs(avg - target).max() < 1e-9
    # and against the commutant-projection channel directly
    from pru_lab import DenseOperator, haar_twirl_exact

    twirled = haar_twirl_exact(DenseOperator(XX, (4, 1)), 2, 2)
    assert np.abs(avg - twirled.entries).max() < 1e-9


def test_dense_cap():
    c = sample_clifford(6, 0)
    with pytest.raises(CapacityError):
        c.to_dense()
