"""Energy-dependent effective Hamiltonians on the two-level block.

Exact form: h(E) = PHP + PHQ (E - QHQ)^{-1} QHP.  Series form: the Q-block
inverse is expanded around a reference energy w0 using
(A - B)^{-1} = A^{-1} sum_n (B A^{-1})^n with A = w0 - Q H0' Q (diagonal)
and B = Q H_int Q - (E - w0).  A fixed-point iteration on E turns either
form into an eigenvalue solver for the full model's low-lying levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .couplings import CouplingSet
from .errors import ConvergenceError, PoleError
from .hilbert import CompositeSpace
from .linalg import HermitianOperator
from .sw import _split_operators

POLE_RTOL = 1e-9
GAP_GUARD = 0.5  # in units of w_c; max allowed jump of the tracked root


@dataclass(frozen=True)
class ResolventConfig:
    """M: series truncation order, or None for the exact resolvent."""

    M: int | None = None
    omega0: float | None = None
    max_iter: int = 200
    tol: float = 1e-10  # relative to w_c
    damping: float = 0.5

    def __post_init__(self):
        if self.M is not None and self.M < 0:
            raise ValueError("series order M must be >= 0")
        if self.tol <= 0 or self.max_iter < 1 or not 0 < self.damping <= 1:
            raise ValueError("invalid resolvent configuration")


@dataclass(frozen=True)
class SelfConsistentResult:
    energy: float
    converged: bool
    iterations: int
    seed: float = field(repr=False, default=0.0)


class ResolventSolver:
    """Precomputed P/Q blocks of one full model for repeated evaluations."""

    def __init__(self, H_full: HermitianOperator, space: CompositeSpace,
                 couplings: CouplingSet):
        if H_full.factor_dims != space.factor_dims:
            raise ValueError("H_full does not live on the given space")
        n_low = space.n_low
        M = H_full.entries
        self.omega_c = couplings.omega_c
        self.n_low = n_low
        self.HPP = M[:n_low, :n_low]
        self.HPQ = M[:n_low, n_low:]
        self.HQQ = M[n_low:, n_low:]
        # quasi-free diagonal on the Q block (diagonal in the product basis)
        H0p, _, _ = _split_operators(couplings, space)
        self.h0q = np.diag(H0p).real[n_low:]
        self.HintQ = self.HQQ - np.diag(self.h0q)
        # spectral form of the Q block for the exact resolvent
        wq, Vq = np.linalg.eigh(self.HQQ)
        self.wq = wq
        self.Mq = self.HPQ @ Vq
        self.default_omega0 = 0.5 * float(
            couplings.omega_prime[0] + couplings.omega_prime[1]
        )
        self.series_warning = False

    # ------------------------------------------------------------ evaluators
    def h_eff_exact(self, E: float) -> HermitianOperator:
        gap = float(np.min(np.abs(E - self.wq)))
        if gap < POLE_RTOL * self.omega_c:
            k = int(np.argmin(np.abs(E - self.wq)))
            raise PoleError(
                f"E={E:.12g} within {gap:.3e} of Q-block eigenvalue {self.wq[k]:.12g}"
            )
        H = self.HPP + (self.Mq / (E - self.wq)) @ self.Mq.conj().T
        return HermitianOperator(H, (2, self.n_low // 2))

    def h_eff_series(self, E: float, M: int, omega0: float | None = None
                     ) -> HermitianOperator:
        if M < 0:
            raise ValueError("M must be >= 0")
        w0 = self.default_omega0 if omega0 is None else float(omega0)
        a_diag = w0 - self.h0q
        if np.min(np.abs(a_diag)) < POLE_RTOL * self.omega_c:
            raise PoleError("w0 coincides with a quasi-free Q-block level")
        B = self.HintQ - (E - w0) * np.eye(len(a_diag))
        # X_n = A^{-1} (B A^{-1})^n QHP, accumulated on (dim_Q x n_low) panels
        QHP = self.HPQ.conj().T
        X = QHP / a_diag[:, None]
        R = X.copy()
        norms = [float(np.linalg.norm(X))]
        for _ in range(M):
            X = (B @ X) / a_diag[:, None]
            R += X
            norms.append(float(np.linalg.norm(X)))
        if len(norms) >= 4 and all(
            norms[-i] > norms[-i - 1] for i in range(1, 4)
        ):
            self.series_warning = True
        H = self.HPP + self.HPQ @ R
        H = 0.5 * (H + H.conj().T)  # symmetrize float round-off only
        return HermitianOperator(H, (2, self.n_low // 2))

    def _h_eff(self, E: float, cfg: ResolventConfig) -> HermitianOperator:
        if cfg.M is None:
            return self.h_eff_exact(E)
        return self.h_eff_series(E, cfg.M, cfg.omega0)

    # ----------------------------------------------------------- fixed point
    def solve_selfconsistent(
        self, seeds, cfg: ResolventConfig | None = None
    ) -> list[SelfConsistentResult]:
        cfg = cfg or ResolventConfig()
        tol = cfg.tol * self.omega_c
        out = []
        for seed in np.atleast_1d(np.asarray(seeds, dtype=float)):
            out.append(self._solve_one(float(seed), cfg, tol))
        return out

    def _solve_one(self, seed: float, cfg: ResolventConfig, tol: float
                   ) -> SelfConsistentResult:
        E = seed
        step_scale = 1.0
        for it in range(1, cfg.max_iter + 1):
            try:
                w = np.linalg.eigvalsh(self._h_eff(E, cfg).entries)
            except PoleError:
                # nudge off the pole and damp subsequent steps
                step_scale *= cfg.damping
                E += 10.0 * POLE_RTOL * self.omega_c
                continue
            E_next = float(w[np.argmin(np.abs(w - E))])
            if abs(E_next - E) > GAP_GUARD * self.omega_c:
                return SelfConsistentResult(E, False, it, seed)
            if abs(E_next - E) < tol:
                return SelfConsistentResult(E_next, True, it, seed)
            E = E + step_scale * (E_next - E)
        return SelfConsistentResult(E, False, cfg.max_iter, seed)


def selfconsistent_transitions(
    solver: ResolventSolver, seeds, cfg: ResolventConfig | None = None
) -> np.ndarray:
    """Transition energies E_j - E_0 from self-consistent absolute seeds.

    ``seeds`` must start with the ground-state seed.  Raises when any
    fixed-point iteration fails to converge.
    """
    results = solver.solve_selfconsistent(seeds, cfg)
    bad = [r for r in results if not r.converged]
    if bad:
        raise ConvergenceError(
            f"{len(bad)} self-consistent root(s) failed, first seed {bad[0].seed:.6g}"
        )
    energies = np.array([r.energy for r in results])
    return energies[1:] - energies[0]
