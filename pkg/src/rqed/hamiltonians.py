"""Builders for every model in the toolkit.

Full models live on atom-eigenbasis (x) Fock or position-grid (x) Fock
spaces; truncated models live on the two-level (x) Fock space.  All
builders return HermitianOperator, so Hermiticity is checked on exit.

Pauli conventions in the ordered basis (|0>, |1>):
sigma_z = diag(-1, +1), sigma_x = [[0,1],[1,0]], sigma_y = [[0,i],[-i,0]],
so (w/2) sigma_z puts the ground level at -w/2.
"""

from __future__ import annotations

import enum
from typing import Callable

import numpy as np

from .atoms import AtomSpectrum, GridAtom
from .couplings import CouplingSet
from .errors import InstabilityError
from .hilbert import CompositeSpace, FockSpace
from .linalg import HermitianOperator, eigvalsh, unitary_from_hermitian
from .sw import SWCoefficients

PAULI_Z = np.diag([-1.0, 1.0])
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]])
I2 = np.eye(2)


class ModelTag(enum.Enum):
    FULL_DIPOLE = "full_dipole"
    FULL_COULOMB = "full_coulomb"
    FULL_ETA = "full_eta"
    CIRCUIT_FULL = "circuit_full"
    QRM_D = "qrm"
    QRM_ETA = "qrm_eta"
    RQRM = "rqrm"
    RQRM_SIMPLE = "rqrm_simple"
    RQRM_BOGO = "rqrm_bogo"
    QRM_GI = "qrm_gi"
    RQRM_GI = "rqrm_gi"
    CIRCUIT_QRM = "circuit_qrm"
    CIRCUIT_RQRM = "circuit_rqrm"


def _check_eta(eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta={eta} outside [0, 1]")
    return float(eta)


# ----------------------------------------------------------------- full models

def build_full_dipole(space: CompositeSpace, couplings: CouplingSet) -> HermitianOperator:
    """Multilevel atom + mode with -i g_jk (a - a^dag) coupling and G_jk/w_c."""
    n_a, fock = space.n_a, space.fock
    g = couplings.g[:n_a, :n_a]
    G = couplings.G[:n_a, :n_a]
    omega = couplings.atom.omega[:n_a]
    wc = couplings.omega_c
    H = (
        np.kron(np.diag(omega), fock.identity)
        + wc * np.kron(np.eye(n_a), fock.number)
        + np.kron(-1j * g, fock.a_minus_adag)
        + np.kron(G / wc, fock.identity)
    )
    return HermitianOperator(H, space.factor_dims)


def build_circuit_full(space: CompositeSpace, couplings: CouplingSet) -> HermitianOperator:
    """Multilevel atom + mode with -g_jk (a + a^dag) coupling and G_jk/w_c."""
    n_a, fock = space.n_a, space.fock
    g = couplings.g[:n_a, :n_a]
    G = couplings.G[:n_a, :n_a]
    omega = couplings.atom.omega[:n_a]
    wc = couplings.omega_c
    H = (
        np.kron(np.diag(omega), fock.identity)
        + wc * np.kron(np.eye(n_a), fock.number)
        + np.kron(-g, fock.a_plus_adag)
        + np.kron(G / wc, fock.identity)
    )
    return HermitianOperator(H, space.factor_dims)


def build_full_dipole_grid(
    grid: GridAtom, fock: FockSpace, omega_c: float, A0: float, q: float = 1.0
) -> HermitianOperator:
    """Dipole-form full model assembled on the position grid (x) Fock space."""
    n_x = grid.n_points
    x = grid.x
    H = (
        np.kron(grid.hamiltonian(), fock.identity)
        + omega_c * np.kron(np.eye(n_x), fock.number)
        - 1j * q * omega_c * A0 * np.kron(np.diag(x), fock.a_minus_adag)
        + omega_c * q**2 * A0**2 * np.kron(np.diag(x**2), fock.identity)
    )
    return HermitianOperator(H, (n_x, fock.n_ph))


def build_full_coulomb(
    grid: GridAtom, fock: FockSpace, omega_c: float, A0: float, q: float = 1.0
) -> HermitianOperator:
    """Minimal-coupling full model, (p - qA0(a + a^dag))^2/2m expanded."""
    return build_full_eta(grid, fock, omega_c, A0, eta=0.0, q=q)


def build_full_eta(
    grid: GridAtom,
    fock: FockSpace,
    omega_c: float,
    A0: float,
    eta: float,
    q: float = 1.0,
) -> HermitianOperator:
    """One-parameter family interpolating minimal coupling (eta=0) and the
    dipole form (eta=1); the spectrum is eta-independent up to truncation."""
    eta = _check_eta(eta)
    n_x = grid.n_points
    x = grid.x
    I_x = np.eye(n_x)
    H = (
        np.kron(grid.hamiltonian(), fock.identity)
        + omega_c * np.kron(I_x, fock.number)
        - (1.0 - eta) * (q * A0 / grid.m) * np.kron(grid.momentum, fock.a_plus_adag)
        + (1.0 - eta) ** 2 * (q**2 * A0**2 / (2.0 * grid.m))
        * np.kron(I_x, fock.quad_plus_sq)
        - 1j * eta * q * omega_c * A0 * np.kron(np.diag(x), fock.a_minus_adag)
        + eta**2 * omega_c * q**2 * A0**2 * np.kron(np.diag(x**2), fock.identity)
    )
    return HermitianOperator(H, (n_x, fock.n_ph))


# ------------------------------------------------------------ truncated models

def build_qrm_dipole(couplings: CouplingSet, fock: FockSpace) -> HermitianOperator:
    """(wbar_10/2) sigma_z + w_c n - i g_01 sigma_x (a - a^dag)."""
    wc = couplings.omega_c
    H = (
        0.5 * couplings.omega_bar_10 * np.kron(PAULI_Z, fock.identity)
        + wc * np.kron(I2, fock.number)
        - 1j * couplings.g[0, 1] * np.kron(PAULI_X, fock.a_minus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph))


def build_rqrm(
    couplings: CouplingSet, sw: SWCoefficients, fock: FockSpace
) -> HermitianOperator:
    """Renormalized two-level model with the full second-order structure."""
    wc = couplings.omega_c
    wt10 = couplings.omega_bar_10 + 2.0 * sw.A_minus
    gt01 = couplings.g[0, 1] + sw.C[0, 1]
    H = (
        0.5 * wt10 * np.kron(PAULI_Z, fock.identity)
        + wc * np.kron(I2, fock.number)
        + np.kron(sw.B_plus * I2 + sw.B_minus * PAULI_Z, fock.quad_minus_sq)
        - 1j * gt01 * np.kron(PAULI_X, fock.a_minus_adag)
        - sw.D[0, 1] * np.kron(PAULI_Y, fock.a_plus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph))


def build_rqrm_simplified(
    couplings: CouplingSet, sw: SWCoefficients, fock: FockSpace
) -> HermitianOperator:
    """Renormalized model with the B_- and D_01 terms dropped."""
    wc = couplings.omega_c
    wt10 = couplings.omega_bar_10 + 2.0 * sw.A_minus
    gt01 = couplings.g[0, 1] + sw.C[0, 1]
    H = (
        0.5 * wt10 * np.kron(PAULI_Z, fock.identity)
        + wc * np.kron(I2, fock.number)
        + sw.B_plus * np.kron(I2, fock.quad_minus_sq)
        - 1j * gt01 * np.kron(PAULI_X, fock.a_minus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph))


def renormalized_mode_frequency(couplings: CouplingSet, sw: SWCoefficients) -> float:
    """w_c-tilde = sqrt(w_c^2 - 4 B_+ w_c); raises when imaginary."""
    wc = couplings.omega_c
    disc = wc**2 - 4.0 * sw.B_plus * wc
    if disc <= 0.0:
        raise InstabilityError(
            f"w_c^2 - 4 B_+ w_c = {disc:.3e} <= 0: squeezed mode unstable"
        )
    return float(np.sqrt(disc))


def bogoliubov_rqrm(
    couplings: CouplingSet, sw: SWCoefficients, fock: FockSpace
) -> tuple[HermitianOperator, float]:
    """Simplified renormalized model rotated to the squeezed mode basis."""
    wc = couplings.omega_c
    wtc = renormalized_mode_frequency(couplings, sw)
    wt10 = couplings.omega_bar_10 + 2.0 * sw.A_minus
    gt01 = (couplings.g[0, 1] + sw.C[0, 1]) * np.sqrt(wc / wtc)
    H = (
        0.5 * wt10 * np.kron(PAULI_Z, fock.identity)
        + wtc * np.kron(I2, fock.number)
        - 1j * gt01 * np.kron(PAULI_X, fock.a_minus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph)), wtc


def build_qrm_eta(
    atom: AtomSpectrum,
    fock: FockSpace,
    omega_c: float,
    A0: float,
    eta: float,
    q: float = 1.0,
    m: float = 1.0,
) -> HermitianOperator:
    """Naive two-level projection of the eta-interpolated full model.

    Momentum matrix elements are obtained from p_jk = i m w_jk x_jk, so
    only the solved spectrum is needed.  Unlike the gauge-invariant
    truncations, this family's spectrum does depend on eta.
    """
    eta = _check_eta(eta)
    x2 = atom.x_mat[:2, :2]
    X2 = atom.x2_mat[:2, :2]
    wjk = atom.omega_jk()[:2, :2]
    H = (
        np.kron(np.diag(atom.omega[:2]), fock.identity)
        + omega_c * np.kron(I2, fock.number)
        + (1.0 - eta) ** 2 * (q**2 * A0**2 / (2.0 * m))
        * np.kron(I2, fock.quad_plus_sq)
        - 1j * (1.0 - eta) * q * A0 * np.kron(wjk * x2, fock.a_plus_adag)
        - 1j * eta * q * omega_c * A0 * np.kron(x2, fock.a_minus_adag)
        + eta**2 * omega_c * q**2 * A0**2 * np.kron(X2, fock.identity)
    )
    return HermitianOperator(H, (2, fock.n_ph))


def build_gauge_truncated(
    eta: float,
    couplings: CouplingSet,
    fock: FockSpace,
    renormalized: bool = False,
    sw: SWCoefficients | None = None,
) -> HermitianOperator:
    """Gauge-invariant truncated family.

    The atomic and photonic parts are dressed by powers of a single
    unitary U = exp[i (g/w) sigma_x (a + a^dag)], so spectra are exactly
    eta-independent.  With ``renormalized`` the frequencies, coupling and
    mode are the Bogoliubov-renormalized ones.
    """
    eta = _check_eta(eta)
    wc = couplings.omega_c
    if renormalized:
        if sw is None:
            raise ValueError("renormalized family needs SW coefficients")
        w_mode = renormalized_mode_frequency(couplings, sw)
        w10 = couplings.omega_bar_10 + 2.0 * sw.A_minus
        g = (couplings.g[0, 1] + sw.C[0, 1]) * np.sqrt(wc / w_mode)
    else:
        w_mode = wc
        w10 = couplings.omega_bar_10
        g = couplings.g[0, 1]

    H_a = 0.5 * w10 * np.kron(PAULI_Z, fock.identity)
    H_ph = w_mode * np.kron(I2, fock.number)
    gen = (g / w_mode) * np.kron(PAULI_X, fock.a_plus_adag)

    U_a = unitary_from_hermitian(gen, 1.0 - eta)
    U_ph = unitary_from_hermitian(gen, eta)
    H = U_a @ H_a @ U_a.conj().T + U_ph.conj().T @ H_ph @ U_ph
    return HermitianOperator(H, (2, fock.n_ph))


def build_circuit_qrm(couplings: CouplingSet, fock: FockSpace) -> HermitianOperator:
    """Two-level circuit model; extra terms survive broken parity."""
    wc = couplings.omega_c
    g = couplings.g
    G = couplings.G
    g_atom = 0.5 * (g[1, 1] + g[0, 0]) * I2 + 0.5 * (g[1, 1] - g[0, 0]) * PAULI_Z \
        + g[0, 1] * PAULI_X
    H = (
        wc * np.kron(I2, fock.number)
        + 0.5 * couplings.omega_bar_10 * np.kron(PAULI_Z, fock.identity)
        + (G[0, 1] / wc) * np.kron(PAULI_X, fock.identity)
        - np.kron(g_atom, fock.a_plus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph))


def build_circuit_rqrm(
    couplings: CouplingSet, sw: SWCoefficients, fock: FockSpace
) -> HermitianOperator:
    """Renormalized circuit model with all parity-breaking terms."""
    wc = couplings.omega_c
    G = couplings.G
    wt10 = couplings.omega_bar_10 + 2.0 * sw.A_minus
    gt = couplings.g[:2, :2] + sw.C
    gt_atom = 0.5 * (gt[1, 1] + gt[0, 0]) * I2 + 0.5 * (gt[1, 1] - gt[0, 0]) * PAULI_Z \
        + gt[0, 1] * PAULI_X
    B_atom = sw.B_plus * I2 + sw.B_minus * PAULI_Z + 2.0 * sw.B[0, 1] * PAULI_X
    H = (
        wc * np.kron(I2, fock.number)
        + 0.5 * wt10 * np.kron(PAULI_Z, fock.identity)
        + (G[0, 1] / wc + sw.A[1, 0] + sw.A[0, 1]) * np.kron(PAULI_X, fock.identity)
        - np.kron(gt_atom, fock.a_plus_adag)
        - np.kron(B_atom, fock.quad_plus_sq)
        - 1j * (sw.A[1, 0] - sw.A[0, 1]) * np.kron(PAULI_Y, fock.squeeze_diff)
        + 1j * sw.D[0, 1] * np.kron(PAULI_Y, fock.a_minus_adag)
    )
    return HermitianOperator(H, (2, fock.n_ph))


# -------------------------------------------------------------------- helpers

def adaptive_n_ph(
    build: Callable[[int], HermitianOperator],
    n_ph0: int = 40,
    n_track: int = 6,
    rtol: float = 1e-8,
    max_doublings: int = 5,
) -> int:
    """Smallest n_ph (by doubling from n_ph0) whose lowest ``n_track``
    eigenvalues are stable under a further doubling."""
    n_ph = n_ph0
    w = np.sort(eigvalsh(build(n_ph)))[:n_track]
    for _ in range(max_doublings):
        w2 = np.sort(eigvalsh(build(2 * n_ph)))[:n_track]
        scale = max(float(np.max(np.abs(w2))), 1e-300)
        if np.max(np.abs(w2 - w)) / scale < rtol:
            return n_ph
        n_ph, w = 2 * n_ph, w2
    return n_ph


def low_transitions(H, n: int) -> np.ndarray:
    """First n transition energies E_j - E_0 of a Hermitian matrix."""
    w = eigvalsh(H)
    return w[1 : n + 1] - w[0]
