"""1-D anharmonic atoms on a sinc-DVR grid.

Solves double-well dipoles and fluxonium circuits for eigenfrequencies and
position/flux matrix elements.  Everything is in hbar = 1 angular-frequency
units; fluxonium energies quoted in GHz are multiplied by 2*pi on ingest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .errors import ConvergenceError

TWO_PI = 2.0 * np.pi

#: relative change of the lowest levels under grid doubling that still
#: counts as converged
GRID_CONVERGENCE_RTOL = 1e-10

#: eigenfunction amplitude allowed at the box edge
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class AtomSpectrum:
    """Eigenfrequencies and position matrix elements of a 1-D atom.

    ``omega`` is ground-state-shifted (omega[0] == 0).  For fluxonium,
    ``x_mat``/``x2_mat`` hold the flux matrix elements phi_jk / Phi_jk.
    """

    omega: np.ndarray
    x_mat: np.ndarray
    x2_mat: np.ndarray
    grid_meta: dict = field(repr=False)

    @property
    def n_levels(self) -> int:
        return len(self.omega)

    def omega_jk(self) -> np.ndarray:
        return self.omega[:, None] - self.omega[None, :]


@dataclass(frozen=True)
class DoubleWellParams:
    """V(x) = alpha x^4 - beta x^2 with anharmonicity gamma = m beta^3/alpha^2."""

    m: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0 or self.m <= 0:
            raise ValueError("m, alpha, beta must all be positive")

    @property
    def gamma(self) -> float:
        return self.m * self.beta**3 / self.alpha**2

    def potential(self) -> Callable[[np.ndarray], np.ndarray]:
        a, b = self.alpha, self.beta
        return lambda x: a * x**4 - b * x**2


def double_well_from_gamma(gamma: float, m: float = 1.0) -> DoubleWellParams:
    """Fix beta = 1 and solve alpha from the anharmonicity parameter."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    beta = 1.0
    alpha = np.sqrt(m * beta**3 / gamma)
    return DoubleWellParams(m=m, alpha=alpha, beta=beta)


@dataclass(frozen=True)
class FluxoniumParams:
    """Fluxonium energies in angular-frequency units, flux in units of phi_0."""

    E_C: float
    E_L: float
    E_J: float
    phi_ext: float

    def __post_init__(self):
        if min(self.E_C, self.E_L) <= 0 or self.E_J < 0:
            raise ValueError("E_C, E_L must be positive and E_J non-negative")

    @classmethod
    def from_ghz(cls, E_C, E_L, E_J, phi_ext) -> "FluxoniumParams":
        return cls(TWO_PI * E_C, TWO_PI * E_L, TWO_PI * E_J, phi_ext)

    def potential(self) -> Callable[[np.ndarray], np.ndarray]:
        E_L, E_J, phi_ext = self.E_L, self.E_J, self.phi_ext
        return lambda p: 0.5 * E_L * p**2 - E_J * np.cos(p - phi_ext)

    @property
    def mass(self) -> float:
        # 4 E_C n^2 == n^2 / (2 m)
        return 1.0 / (8.0 * self.E_C)


@dataclass(frozen=True)
class GridAtom:
    """Position-grid representation of the atomic problem.

    Used by the gauge-family builders, which need kinetic and momentum
    matrices rather than precomputed eigenpairs.
    """

    x: np.ndarray
    kinetic: np.ndarray
    momentum: np.ndarray
    v_diag: np.ndarray
    m: float

    @property
    def n_points(self) -> int:
        return len(self.x)

    def hamiltonian(self) -> np.ndarray:
        return self.kinetic + np.diag(self.v_diag)


def sinc_dvr_kinetic(n_points: int, dx: float, m: float) -> np.ndarray:
    """Closed-form sinc-DVR kinetic matrix on a uniform grid."""
    i = np.arange(n_points)
    d = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        T = np.where(d == 0, np.pi**2 / 3.0, 2.0 * (-1.0) ** d / d**2)
    return T / (2.0 * m * dx**2)


def sinc_dvr_momentum(n_points: int, dx: float) -> np.ndarray:
    """Closed-form sinc-DVR momentum matrix (-i d/dx), Hermitian."""
    i = np.arange(n_points)
    d = i[:, None] - i[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        P = np.where(d == 0, 0.0, (-1.0) ** d / d)
    return -1j * P / dx


def grid_representation(
    m: float,
    V: Callable[[np.ndarray], np.ndarray],
    n_points: int,
    half_width: float,
    center: float = 0.0,
) -> GridAtom:
    x = np.linspace(center - half_width, center + half_width, n_points)
    dx = x[1] - x[0]
    return GridAtom(
        x=x,
        kinetic=sinc_dvr_kinetic(n_points, dx, m),
        momentum=sinc_dvr_momentum(n_points, dx),
        v_diag=np.asarray(V(x), dtype=float),
        m=m,
    )


def _solve_grid(grid: GridAtom, n_levels: int):
    w, vec = sla.eigh(grid.hamiltonian(), subset_by_index=[0, n_levels - 1])
    # deterministic sign: largest-magnitude component positive
    for k in range(vec.shape[1]):
        j = np.argmax(np.abs(vec[:, k]))
        if vec[j, k] < 0:
            vec[:, k] = -vec[:, k]
    return w, vec


def solve_potential_1d(
    m: float,
    V: Callable[[np.ndarray], np.ndarray],
    n_levels: int,
    n_points: int = 2048,
    half_width: float | None = None,
    center: float = 0.0,
    check_convergence: bool = True,
    require_converged: bool = False,
) -> AtomSpectrum:
    """Lowest ``n_levels`` eigenpairs of p^2/2m + V(x) by sinc-DVR.

    The box half-width is grown automatically until the highest retained
    eigenfunction has negligible amplitude at the edges.  Convergence is
    assessed by comparing against the half-resolution grid (so that the
    n/2 -> n doubling moves the first ten levels by < 1e-10 relative).
    """
    if n_points < 4 * n_levels:
        raise ValueError(f"n_points={n_points} < 4*n_levels={4 * n_levels}")

    L = half_width if half_width is not None else 6.0
    for _ in range(40):
        grid = grid_representation(m, V, n_points, L, center)
        w, vec = _solve_grid(grid, n_levels)
        edge = max(np.max(np.abs(vec[0, :])), np.max(np.abs(vec[-1, :])))
        if edge < TAIL_TOL or half_width is not None:
            break
        L *= 1.4
    else:
        raise ConvergenceError("could not find a box containing all eigenfunctions")

    x = grid.x
    x_mat = vec.T @ (x[:, None] * vec)
    x2_mat = vec.T @ ((x**2)[:, None] * vec)

    converged = True
    if check_convergence:
        half = grid_representation(m, V, n_points // 2, L, center)
        ncmp = min(10, n_levels)
        wh, _ = _solve_grid(half, ncmp)
        scale = max(np.max(np.abs(w[:ncmp])), 1e-300)
        converged = bool(np.max(np.abs(wh[:ncmp] - w[:ncmp])) / scale < GRID_CONVERGENCE_RTOL)
        if require_converged and not converged:
            raise ConvergenceError(
                "grid not converged: halving the resolution shifts the low levels"
            )

    return AtomSpectrum(
        omega=w - w[0],
        x_mat=x_mat,
        x2_mat=x2_mat,
        grid_meta={
            "n_points": n_points,
            "half_width": float(L),
            "center": float(center),
            "edge_amplitude": float(edge),
            "converged": converged,
        },
    )


def solve_double_well(
    params: DoubleWellParams, n_levels: int = 48, **kwargs
) -> AtomSpectrum:
    return solve_potential_1d(params.m, params.potential(), n_levels, **kwargs)


def solve_fluxonium(
    params: FluxoniumParams, n_levels: int = 48, **kwargs
) -> AtomSpectrum:
    """Spectrum of 4 E_C n^2 + E_L phi^2/2 - E_J cos(phi - phi_ext).

    ``x_mat`` holds phi_jk, ``x2_mat`` holds Phi_jk.  The grid is centered
    at phi = 0, the reflection point of the potential when phi_ext = k*pi.
    """
    return solve_potential_1d(params.mass, params.potential(), n_levels, **kwargs)


def double_well_grid(
    params: DoubleWellParams, n_points: int, half_width: float
) -> GridAtom:
    """Coarse grid representation for full-space gauge studies."""
    return grid_representation(params.m, params.potential(), n_points, half_width)
