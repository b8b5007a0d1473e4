from __future__ import annotations

import numpy as np
import pytest

from rqed.errors import NonHermitianError, NotPositiveSemidefiniteError
from rqed.linalg import (
    DensityMatrix,
    HermitianOperator,
    difference_up_to_identity,
    eigh,
    kron,
    partial_trace,
    partial_trace_state,
    psd_sqrt,
    unitary_from_hermitian,
)

SZ = np.diag([-1.0, 1.0])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return M + M.conj().T


def test_eigh_diagonal_two_level():
    res = eigh(SZ)
    np.testing.assert_allclose(res.eigenvalues, [-1.0, 1.0])


def test_eigh_sigma_x():
    res = eigh(SX)
    np.testing.assert_allclose(res.eigenvalues, [-1.0, 1.0])
    v_minus = res.eigenvectors[:, 0]
    assert abs(abs(v_minus[0]) - 1 / np.sqrt(2)) < 1e-12
    assert np.sign(v_minus[0] * v_minus[1]) == -1


def test_eigh_reconstruction_random():
    H = random_hermitian(8, 0)
    res = eigh(H)
    rebuilt = (res.eigenvectors * res.eigenvalues) @ res.eigenvectors.conj().T
    assert np.max(np.abs(rebuilt - H)) < 1e-10 * np.max(np.abs(H))
    V = res.eigenvectors
    assert np.max(np.abs(V.conj().T @ V - np.eye(8))) < 1e-10
    spread = res.eigenvalues[-1] - res.eigenvalues[0]
    assert np.all(res.residuals < 1e-9 * spread)


def test_eigh_rejects_non_hermitian():
    M = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NonHermitianError):
        eigh(M)


def test_eigh_degenerate_deterministic():
    # permutation-symmetric matrix with a degenerate pair
    H = np.diag([1.0, 1.0, 2.0])
    res1 = eigh(H)
    res2 = eigh(H[::-1, ::-1][::-1, ::-1])  # identical matrix, fresh array
    np.testing.assert_array_equal(res1.eigenvectors, res2.eigenvectors)


def test_psd_sqrt_scalar_and_diagonal():
    np.testing.assert_allclose(psd_sqrt(np.eye(4) / 4.0), np.eye(4) / 2.0)
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_psd_sqrt_selfconsistent_random():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    rho = A @ A.conj().T
    rho /= np.trace(rho).real
    S = psd_sqrt(rho)
    assert np.max(np.abs(S @ S - rho)) < 1e-10


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefiniteError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_kron_trivial_and_mixed_product():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    np.testing.assert_array_equal(
        kron(SZ, np.diag([0.0, 1.0])), np.diag([0.0, -1.0, 0.0, 1.0])
    )
    rng = np.random.default_rng(2)
    A, C = rng.normal(size=(2, 2, 2))
    B, D = rng.normal(size=(2, 3, 3))
    np.testing.assert_allclose(kron(A, B) @ kron(C, D), kron(A @ C, B @ D))


def test_kron_concatenates_factor_dims():
    a = HermitianOperator(SZ, (2,))
    b = HermitianOperator(np.eye(3), (3,))
    assert kron(a, b).factor_dims == (2, 3)


def test_partial_trace_product_state():
    rho_a = np.diag([0.25, 0.75])
    rho_b = np.diag([0.1, 0.2, 0.7])
    np.testing.assert_allclose(
        partial_trace(np.kron(rho_a, rho_b), (2, 3), keep=0), rho_a
    )


def test_partial_trace_bell_state():
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    for keep in (0, 1):
        np.testing.assert_allclose(
            partial_trace(np.outer(psi, psi), (2, 2), keep), np.eye(2) / 2,
            atol=1e-14,
        )
        np.testing.assert_allclose(
            partial_trace_state(psi, (2, 2), keep), np.eye(2) / 2, atol=1e-14
        )


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rho = A @ A.conj().T
    rho /= np.trace(rho).real
    red = partial_trace(rho, (2, 3), keep=1)
    assert abs(np.trace(red).real - 1.0) < 1e-12


def test_unitary_identity_pauli_group():
    G = random_hermitian(4, 4)
    assert np.max(np.abs(unitary_from_hermitian(G, 0.0) - np.eye(4))) < 1e-14
    np.testing.assert_allclose(
        unitary_from_hermitian(SX, np.pi / 2), 1j * SX, atol=1e-12
    )
    U1 = unitary_from_hermitian(G, 0.3)
    U2 = unitary_from_hermitian(G, 0.5)
    np.testing.assert_allclose(U1 @ U2, unitary_from_hermitian(G, 0.8), atol=1e-12)
    U = unitary_from_hermitian(G, 1.0)
    assert np.max(np.abs(U.conj().T @ U - np.eye(4))) < 1e-10


def test_unitary_preserves_spectrum():
    H = random_hermitian(6, 5)
    U = unitary_from_hermitian(random_hermitian(6, 6), 0.7)
    w1 = np.linalg.eigvalsh(H)
    w2 = np.linalg.eigvalsh(U.conj().T @ H @ U)
    assert np.max(np.abs(w1 - w2)) < 1e-9


def test_density_matrix_invariants():
    DensityMatrix(np.eye(2) / 2)
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2))  # trace 2
    with pytest.raises(NotPositiveSemidefiniteError):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_hermitian_operator_contract():
    with pytest.raises(NonHermitianError):
        HermitianOperator(np.array([[0.0, 1.0], [2.0, 0.0]]), (2,))
    with pytest.raises(ValueError):
        HermitianOperator(np.eye(4), (3,))


def test_difference_up_to_identity():
    A = random_hermitian(5, 7)
    shift, res = difference_up_to_identity(A + 2.5 * np.eye(5), A)
    assert abs(shift - 2.5) < 1e-12
    assert res < 1e-12
