"""Schrieffer-Wolff block decoupling of the two lowest atomic levels.

Provides the closed-form renormalization coefficients A, B, C, D, the
anti-Hermitian generator on the composite space, a numerical check of the
defining commutator condition [H0', S] = -H_int^high, and the effective
low-energy Hamiltonian obtained by explicit matrix algebra (the
cross-validation path for the closed-form coefficients).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .couplings import CouplingSet
from .errors import ResonanceError
from .hilbert import CompositeSpace, FockSpace
from .linalg import HermitianOperator

COEFF_CONVERGENCE_RTOL = 1e-10
COEFF_CONVERGENCE_STEP = 8
DENOMINATOR_RTOL = 1e-9


@dataclass(frozen=True)
class SWCoefficients:
    """Second-order renormalization constants of the two-level block."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    l_max: int
    converged: bool

    @property
    def A_minus(self) -> float:
        return float(self.A[1, 1] - self.A[0, 0])

    @property
    def A_plus(self) -> float:
        return float(self.A[1, 1] + self.A[0, 0])

    @property
    def B_minus(self) -> float:
        return float(self.B[1, 1] - self.B[0, 0])

    @property
    def B_plus(self) -> float:
        return float(self.B[1, 1] + self.B[0, 0])

    @classmethod
    def zero(cls) -> "SWCoefficients":
        z = np.zeros((2, 2))
        return cls(A=z, B=z.copy(), C=z.copy(), D=z.copy(), l_max=0, converged=True)


def _per_level_contributions(couplings: CouplingSet, l_values: np.ndarray):
    """Contributions of each virtual level l to A, B, C, D for (j,k) in 2x2."""
    g, G = couplings.g, couplings.G
    wc = couplings.omega_c
    wp = couplings.omega_prime

    nl = len(l_values)
    A = np.zeros((nl, 2, 2))
    B = np.zeros((nl, 2, 2))
    C = np.zeros((nl, 2, 2))
    D = np.zeros((nl, 2, 2))
    for i, l in enumerate(l_values):
        for j in range(2):
            for k in range(2):
                wlk = wp[l] - wp[k]
                wlj = wp[l] - wp[j]
                Dlk = wlk**2 - wc**2
                Dlj = wlj**2 - wc**2
                if min(abs(Dlk), abs(Dlj)) < DENOMINATOR_RTOL * wc**2:
                    raise ResonanceError(
                        f"vanishing denominator Delta for virtual level l={l}"
                    )
                if min(abs(wlk), abs(wlj)) < DENOMINATOR_RTOL * wc:
                    raise ResonanceError(
                        f"degenerate transition frequency for virtual level l={l}"
                    )
                A[i, j, k] = g[j, l] * g[l, k] / 2.0 * wc / Dlk - G[j, l] * G[l, k] / (
                    4.0 * wc**2
                ) * (1.0 / wlk + 1.0 / wlj)
                B[i, j, k] = g[j, l] * g[l, k] / 4.0 * (wlk / Dlk + wlj / Dlj)
                C[i, j, k] = (
                    -g[j, l] * G[l, k] / wlk
                    - g[l, k] * G[j, l] / wlj
                    - g[l, k] / Dlk * G[j, l] * wlk
                    - g[j, l] / Dlj * G[l, k] * wlj
                ) / (2.0 * wc)
                D[i, j, k] = 0.5 * (g[j, l] / Dlj * G[l, k] - g[l, k] / Dlk * G[j, l])
    return A, B, C, D


def sw_coefficients(couplings: CouplingSet, l_max: int | None = None) -> SWCoefficients:
    """Sum the virtual-level series for A, B, C, D up to level index l_max.

    Convergence is declared when dropping the last ``COEFF_CONVERGENCE_STEP``
    levels changes every coefficient by less than 1e-10 relative.
    """
    couplings.ensure_dispersive()
    n = couplings.n_levels
    if l_max is None:
        l_max = min(48, n - 1)
    if not 2 <= l_max <= n - 1:
        raise ValueError(f"l_max={l_max} outside [2, {n - 1}]")

    l_values = np.arange(2, l_max + 1)
    per = _per_level_contributions(couplings, l_values)
    full = [p.sum(axis=0) for p in per]

    step = min(COEFF_CONVERGENCE_STEP, len(l_values) - 1)
    short = [p[: len(l_values) - step].sum(axis=0) for p in per]
    scale = max(max(np.max(np.abs(f)) for f in full), 1e-300)
    converged = all(
        np.max(np.abs(f - s)) < COEFF_CONVERGENCE_RTOL * scale
        for f, s in zip(full, short)
    )
    A, B, C, D = full
    return SWCoefficients(A=A, B=B, C=C, D=D, l_max=int(l_max), converged=converged)


def _low_set(n_a: int) -> set[tuple[int, int]]:
    return {(0, 0), (0, 1), (1, 0), (1, 1)}


def _split_operators(couplings: CouplingSet, space: CompositeSpace):
    """Quasi-free H0', low-block interaction, high-block interaction."""
    n_a, fock = space.n_a, space.fock
    g = couplings.g[:n_a, :n_a]
    G = couplings.G[:n_a, :n_a]
    wp = couplings.omega_prime[:n_a]
    wc = couplings.omega_c
    I_ph = fock.identity

    if couplings.flavor == "cavity":
        lin = -1j * fock.a_minus_adag
    else:
        lin = -fock.a_plus_adag

    H0p = np.kron(np.diag(wp), I_ph) + wc * np.kron(np.eye(n_a), fock.number)
    low = _low_set(n_a)
    g_low = np.zeros_like(g)
    g_high = g.copy()
    G_low = np.zeros_like(G)
    G_high = G.copy()
    for j, k in low:
        g_low[j, k] = g[j, k]
        g_high[j, k] = 0.0
        G_low[j, k] = G[j, k]
        G_high[j, k] = 0.0
    # the diagonal G_jj/wc of high levels is already absorbed into w'_j
    np.fill_diagonal(G_high, 0.0)

    HL = np.kron(g_low, lin) + np.kron(G_low / wc, I_ph)
    HH = np.kron(g_high, lin) + np.kron(G_high / wc, I_ph)
    return H0p, HL, HH


def sw_generator(couplings: CouplingSet, space: CompositeSpace) -> np.ndarray:
    """Anti-Hermitian generator S on the composite space.

    The photonic content of the linear part swaps quadratures between the
    two flavors; the quadratic part is a pure atomic operator either way.
    """
    n_a, fock = space.n_a, space.fock
    g = couplings.g[:n_a, :n_a]
    G = couplings.G[:n_a, :n_a]
    wp = couplings.omega_prime[:n_a]
    wc = couplings.omega_c
    low = _low_set(n_a)

    pim = fock.a_minus_adag
    pip = fock.a_plus_adag
    I_ph = fock.identity

    S = np.zeros((space.dim, space.dim), dtype=complex)
    for j in range(n_a):
        for k in range(n_a):
            if (j, k) in low:
                continue
            wjk = wp[j] - wp[k]
            Delta = wjk**2 - wc**2
            if abs(Delta) < DENOMINATOR_RTOL * wc**2:
                raise ResonanceError(f"vanishing Delta[{j},{k}] in generator")
            atom = space.atom_op(j, k)
            if couplings.flavor == "cavity":
                S += 1j * (g[j, k] / Delta) * np.kron(atom, wjk * pim + wc * pip)
            else:
                S += (g[j, k] / Delta) * np.kron(atom, wjk * pip + wc * pim)
            if j != k:
                if abs(wjk) < DENOMINATOR_RTOL * wc:
                    raise ResonanceError(f"degenerate pair ({j},{k}) in generator")
                S += -(G[j, k] / (wc * wjk)) * np.kron(atom, I_ph)
    return S


def verify_generator(couplings: CouplingSet, space: CompositeSpace) -> float:
    """Relative residual of the defining condition [H0', S] = -H_int^high."""
    H0p, _, HH = _split_operators(couplings, space)
    S = sw_generator(couplings, space)
    scale = np.max(np.abs(HH))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(H0p @ S - S @ H0p + HH)) / scale)


def effective_from_sw(space: CompositeSpace, couplings: CouplingSet) -> HermitianOperator:
    """Low-energy effective Hamiltonian by explicit matrix algebra.

    Evaluates P {H0' + H^L + 1/2 [H^H, S] + [H^L, S]} P on a Fock space
    padded by two levels, then keeps the unpadded 2 x n_ph block, so the
    quadratic photon products carry no truncation-edge artifacts.
    """
    n_ph = space.n_ph
    padded = CompositeSpace(atom=space.atom, fock=FockSpace(n_ph + 2), n_a=space.n_a)
    H0p, HL, HH = _split_operators(couplings, padded)
    S = sw_generator(couplings, padded)

    comm = lambda X, Y: X @ Y - Y @ X
    H_eff = H0p + HL + 0.5 * comm(HH, S) + comm(HL, S)

    keep = np.concatenate(
        [j * padded.n_ph + np.arange(n_ph) for j in range(2)]
    )
    block = H_eff[np.ix_(keep, keep)]
    return HermitianOperator(block, (2, n_ph))
