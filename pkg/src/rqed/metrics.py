"""Quantitative model comparisons: spectral error, fidelity, observables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityMatrix,
    SpectrumResult,
    _as_matrix,
    partial_trace_state,
    psd_sqrt,
)


@dataclass(frozen=True)
class ComparisonReport:
    """Mean-square transition-energy error of one model against a reference."""

    sigma: float
    per_level_errors: np.ndarray
    N: int
    pairing: tuple[int, ...]


def mse_sigma(E_model, E_full, N: int) -> ComparisonReport:
    """sigma = sqrt(mean (E_j - E_j^ref)^2) over the first N excited
    transition energies, levels paired by ascending index."""
    Em = np.sort(np.asarray(E_model, dtype=float))
    Ef = np.sort(np.asarray(E_full, dtype=float))
    if len(Em) < N + 1 or len(Ef) < N + 1:
        raise ValueError(f"need at least {N + 1} levels, got {len(Em)}/{len(Ef)}")
    tm = Em[1 : N + 1] - Em[0]
    tf = Ef[1 : N + 1] - Ef[0]
    err = tm - tf
    return ComparisonReport(
        sigma=float(np.sqrt(np.mean(err**2))),
        per_level_errors=err,
        N=N,
        pairing=tuple(range(1, N + 1)),
    )


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0,1]."""
    r = DensityMatrix(_as_matrix(rho))
    s = DensityMatrix(_as_matrix(sigma))
    sr = psd_sqrt(r.entries)
    inner = psd_sqrt(sr @ s.entries @ sr)
    F = float(np.trace(inner).real)
    if F > 1.0 + 1e-10 or F < -1e-10:
        raise ValueError(f"fidelity {F!r} outside [0, 1] beyond tolerance")
    return min(max(F, 0.0), 1.0)


def state_fidelity(psi, phi) -> float:
    """|<psi|phi>| for normalized pure states."""
    a = np.asarray(psi, dtype=complex)
    b = np.asarray(phi, dtype=complex)
    return float(abs(np.vdot(a, b)))


@dataclass(frozen=True)
class ObservableRecord:
    """Eigenstate observables used by the sweep experiments."""

    pp_sq_3: float      # <psi_3| (a + a^dag)^2 |psi_3>
    p_02_abs: float     # |<psi_0| (a + a^dag) |psi_2>|
    x_02_abs: float     # |<psi_0| x |psi_2>|


def eigenstate_observables(
    spectrum: SpectrumResult, plus_op, plus_sq_op, x_op
) -> ObservableRecord:
    """Evaluate the three panel observables from precomputed eigenvectors.

    The caller supplies the operators already lifted to the model's space
    (for the squeezed-mode model the physical quadratures are rescaled
    b-quadratures; for truncated models x -> x_01 sigma_x + diag terms).
    """
    V = spectrum.eigenvectors
    if V.shape[1] < 4:
        raise ValueError("need at least four eigenstates")
    v0, v2, v3 = V[:, 0], V[:, 2], V[:, 3]
    Pp = _as_matrix(plus_op)
    Pp2 = _as_matrix(plus_sq_op)
    X = _as_matrix(x_op)
    return ObservableRecord(
        pp_sq_3=float(np.vdot(v3, Pp2 @ v3).real),
        p_02_abs=float(abs(np.vdot(v0, Pp @ v2))),
        x_02_abs=float(abs(np.vdot(v0, X @ v2))),
    )


def eigenstate_infidelity(
    vec_a, vec_b, factor_dims, keep: int
) -> float:
    """1 - F between the reduced states of two pure eigenstates."""
    rho_a = partial_trace_state(vec_a, factor_dims, keep)
    rho_b = partial_trace_state(vec_b, factor_dims, keep)
    return 1.0 - fidelity(rho_a, rho_b)


def time_averaged_l2(trace_a, trace_b) -> float:
    """Root-mean-square distance between two sampled time series."""
    a = np.asarray(trace_a, dtype=float)
    b = np.asarray(trace_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("traces must share the sample grid")
    return float(np.sqrt(np.mean((a - b) ** 2)))
