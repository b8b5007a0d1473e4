"""Light-matter couplings and dressed frequencies.

Both flavors produce the same algebraic objects: linear couplings g_jk,
quadratic couplings G_jk (from the exact x^2 / phi^2 matrix elements),
dressed high-level frequencies w'_j and the Schrieffer-Wolff denominators
Delta_jk = (w'_j - w'_k)^2 - w_c^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .atoms import AtomSpectrum
from .errors import DispersiveRegimeError, ResonanceError

DISPERSIVE_THRESHOLD = 0.5
DISPERSIVE_WARN = 0.3
RESONANCE_RTOL = 1e-6


@dataclass(frozen=True)
class CouplingSet:
    """Couplings of one atom-resonator pair in a fixed atomic basis."""

    omega_c: float
    g: np.ndarray
    G: np.ndarray
    omega_prime: np.ndarray
    flavor: str  # "cavity" | "circuit"
    atom: AtomSpectrum

    @property
    def n_levels(self) -> int:
        return len(self.omega_prime)

    @property
    def omega_prime_jk(self) -> np.ndarray:
        return self.omega_prime[:, None] - self.omega_prime[None, :]

    @property
    def Delta(self) -> np.ndarray:
        return self.omega_prime_jk**2 - self.omega_c**2

    @property
    def omega_bar_10(self) -> float:
        """Two-level frequency renormalized by the quadratic term."""
        return float(
            self.atom.omega[1] - self.atom.omega[0] + (self.G[1, 1] - self.G[0, 0]) / self.omega_c
        )

    def dispersive_ratio(self) -> float:
        """max |g_jl / (w'_jl - w_c)| over j in {0,1}, l > 1 (first-order form)."""
        wjl = self.omega_prime_jk[:2, 2:]
        denom = np.abs(np.abs(wjl) - self.omega_c)
        with np.errstate(divide="ignore"):
            ratios = np.abs(self.g[:2, 2:]) / denom
        return float(np.max(ratios)) if ratios.size else 0.0

    def ensure_dispersive(self, threshold: float = DISPERSIVE_THRESHOLD) -> float:
        r = self.dispersive_ratio()
        if r >= threshold:
            raise DispersiveRegimeError(
                f"dispersive ratio {r:.3f} >= threshold {threshold}"
            )
        if r >= DISPERSIVE_WARN:
            warnings.warn(
                f"dispersive ratio {r:.3f} in the marginal band "
                f"[{DISPERSIVE_WARN}, {threshold})",
                stacklevel=2,
            )
        return r


def _check_resonances(omega_prime: np.ndarray, omega_c: float) -> None:
    wjk = omega_prime[:, None] - omega_prime[None, :]
    Delta = wjk**2 - omega_c**2
    low_high = np.abs(Delta[:2, 2:])
    if low_high.size and np.min(low_high) < RESONANCE_RTOL * omega_c**2:
        j, l = np.unravel_index(np.argmin(low_high), low_high.shape)
        raise ResonanceError(
            f"SW denominator Delta[{j},{l + 2}] = {Delta[j, l + 2]:.3e} "
            f"is below {RESONANCE_RTOL:.0e} * w_c^2"
        )


def cavity_couplings(
    atom: AtomSpectrum, omega_c: float, A0: float, q: float = 1.0, m: float = 1.0
) -> CouplingSet:
    """Couplings of a dipole in a cavity: g_jk = w_c q A0 x_jk (hbar = 1)."""
    if omega_c <= 0:
        raise ValueError("omega_c must be positive")
    g = omega_c * q * A0 * atom.x_mat
    G = (omega_c * q * A0) ** 2 * atom.x2_mat
    omega_prime = atom.omega.copy()
    omega_prime[2:] += np.diag(G)[2:] / omega_c
    _check_resonances(omega_prime, omega_c)
    return CouplingSet(
        omega_c=float(omega_c), g=g, G=G, omega_prime=omega_prime,
        flavor="cavity", atom=atom,
    )


def a0_from_target_g(g_target: float, omega_c: float, q: float, x01: float) -> float:
    """Vector-potential amplitude realizing |g_01| = g_target."""
    if x01 == 0.0:
        raise ValueError("x01 = 0: the 0-1 transition is forbidden")
    return float(g_target / (omega_c * q * abs(x01)))


def circuit_couplings(
    atom: AtomSpectrum, omega_c: float, L2: float, C2: float | None = None
) -> CouplingSet:
    """Fluxonium-resonator couplings: g_jk = phi_zpf phi_jk / L2.

    ``L2`` is the coupling inductance in the same natural units as the
    flux matrix elements (phi in units of phi_0, energies angular), so
    phi^2 / (2 L2) is an angular frequency.  ``C2`` defaults to the value
    consistent with omega_c = 1/sqrt(L2 C2).
    """
    if omega_c <= 0 or L2 <= 0:
        raise ValueError("omega_c and L2 must be positive")
    if C2 is None:
        C2 = 1.0 / (L2 * omega_c**2)
    phi_zpf = np.sqrt(1.0 / (2.0 * C2 * omega_c))
    g = phi_zpf * atom.x_mat / L2
    G = omega_c * atom.x2_mat / (2.0 * L2)
    omega_prime = atom.omega.copy()
    omega_prime[2:] += np.diag(G)[2:] / omega_c
    _check_resonances(omega_prime, omega_c)
    return CouplingSet(
        omega_c=float(omega_c), g=g, G=G, omega_prime=omega_prime,
        flavor="circuit", atom=atom,
    )


def l2_from_target_g(g_target: float, omega_c: float, phi01: float) -> float:
    """Coupling inductance realizing |g_01| = g_target (with matched C2)."""
    if phi01 == 0.0:
        raise ValueError("phi01 = 0: the 0-1 transition is forbidden")
    if g_target <= 0:
        raise ValueError("g_target must be positive")
    # g = phi01 sqrt(w_c / (2 L2))
    return float(omega_c * phi01**2 / (2.0 * g_target**2))
