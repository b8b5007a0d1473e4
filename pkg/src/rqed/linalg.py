"""Dense complex linear algebra kernel.

Hermitian eigendecomposition, PSD square roots, Kronecker products,
partial traces and unitaries of the form exp(i*theta*G).  All heavy
lifting is delegated to LAPACK through numpy; this module adds the
contracts (Hermiticity checks, deterministic degenerate ordering,
tensor-factor bookkeeping) the rest of the package relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonHermitianError, NotPositiveSemidefiniteError

HERMITICITY_RTOL = 1e-12
DEGENERACY_RTOL = 1e-10
PSD_CLAMP_RTOL = 1e-12


def hermiticity_defect(M: np.ndarray) -> float:
    """Max |M - M^dagger| relative to max |M| (0 for the zero matrix)."""
    scale = np.max(np.abs(M))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(M - M.conj().T)) / scale)


def require_hermitian(M: np.ndarray, rtol: float = HERMITICITY_RTOL) -> None:
    defect = hermiticity_defect(M)
    if defect > rtol:
        raise NonHermitianError(
            f"matrix is not Hermitian: relative asymmetry {defect:.3e} > {rtol:.1e}"
        )


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix with declared tensor-factor structure."""

    entries: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "factor_dims", tuple(int(d) for d in self.factor_dims))
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {entries.shape}")
        if int(np.prod(self.factor_dims)) != entries.shape[0]:
            raise ValueError(
                f"factor_dims {self.factor_dims} do not multiply to dim {entries.shape[0]}"
            )
        require_hermitian(entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectrumResult:
    """Full spectrum of a Hermitian matrix, ascending, with residuals."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray = field(repr=False)

    @property
    def transition_energies(self) -> np.ndarray:
        return self.eigenvalues - self.eigenvalues[0]


@dataclass(frozen=True)
class DensityMatrix:
    """PSD Hermitian matrix with unit trace."""

    entries: np.ndarray
    factor_dims: tuple[int, ...] = ()

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", rho)
        dims = self.factor_dims or (rho.shape[0],)
        object.__setattr__(self, "factor_dims", tuple(int(d) for d in dims))
        require_hermitian(rho, rtol=1e-10)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace {tr!r} != 1")
        wmin = float(np.linalg.eigvalsh(rho)[0])
        if wmin < -1e-9:
            raise NotPositiveSemidefiniteError(f"min eigenvalue {wmin:.3e} < -1e-9")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _as_matrix(H) -> np.ndarray:
    if isinstance(H, (HermitianOperator, DensityMatrix)):
        return H.entries
    return np.asarray(H, dtype=complex)


def _deterministic_degenerate_order(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Reorder columns inside degenerate clusters by the index of their
    largest-magnitude component, for run-to-run determinism."""
    spread = w[-1] - w[0] if len(w) > 1 else 1.0
    tol = DEGENERACY_RTOL * max(spread, 1.0e-300)
    V = V.copy()
    start = 0
    for stop in range(1, len(w) + 1):
        if stop == len(w) or w[stop] - w[stop - 1] > tol:
            if stop - start > 1:
                block = V[:, start:stop]
                keys = np.argmax(np.abs(block), axis=0)
                order = np.argsort(keys, kind="stable")
                V[:, start:stop] = block[:, order]
            start = stop
    return V


def eigh(H) -> SpectrumResult:
    """Full Hermitian eigendecomposition with deterministic ordering."""
    M = _as_matrix(H)
    require_hermitian(M)
    w, V = np.linalg.eigh(M)
    V = _deterministic_degenerate_order(w, V)
    residuals = np.linalg.norm(M @ V - V * w, axis=0)
    return SpectrumResult(eigenvalues=w, eigenvectors=V, residuals=residuals)


def eigvalsh(H) -> np.ndarray:
    M = _as_matrix(H)
    require_hermitian(M)
    return np.linalg.eigvalsh(M)


def psd_sqrt(M) -> np.ndarray:
    """Hermitian PSD square root; slightly negative eigenvalues are clamped."""
    A = _as_matrix(M)
    require_hermitian(A, rtol=1e-10)
    w, V = np.linalg.eigh(A)
    scale = max(float(w[-1]), 0.0)
    if w[0] < -1e-9 * max(scale, 1.0):
        raise NotPositiveSemidefiniteError(
            f"matrix is not PSD: min eigenvalue {w[0]:.3e}"
        )
    w = np.clip(w, 0.0, None)
    S = (V * np.sqrt(w)) @ V.conj().T
    return 0.5 * (S + S.conj().T)


def kron(A, B):
    """Kronecker product; concatenates factor_dims for HermitianOperators."""
    if isinstance(A, HermitianOperator) and isinstance(B, HermitianOperator):
        return HermitianOperator(
            np.kron(A.entries, B.entries), A.factor_dims + B.factor_dims
        )
    return np.kron(_as_matrix(A), _as_matrix(B))


def partial_trace(rho, factor_dims, keep: int) -> np.ndarray:
    """Trace out all tensor factors except ``keep``."""
    M = _as_matrix(rho)
    dims = tuple(int(d) for d in factor_dims)
    if int(np.prod(dims)) != M.shape[0]:
        raise ValueError(f"factor_dims {dims} do not match dim {M.shape[0]}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep index {keep} out of range for {len(dims)} factors")
    n = len(dims)
    T = M.reshape(dims + dims)
    for axis in reversed(range(n)):
        if axis == keep:
            continue
        T = np.trace(T, axis1=axis, axis2=axis + n)
        n -= 1
    return T


def partial_trace_state(psi, factor_dims, keep: int) -> np.ndarray:
    """Reduced density matrix of a pure state."""
    v = np.asarray(psi, dtype=complex).reshape(tuple(int(d) for d in factor_dims))
    axes = [ax for ax in range(v.ndim) if ax != keep]
    v = np.moveaxis(v, keep, 0).reshape(int(factor_dims[keep]), -1)
    del axes
    return v @ v.conj().T


def difference_up_to_identity(A, B) -> tuple[float, float]:
    """(shift, residual): best identity offset c and max |A - B - cI|.

    The shift is taken as the median of the diagonal difference, which is
    robust to a few outlying diagonal entries.
    """
    MA, MB = _as_matrix(A), _as_matrix(B)
    if MA.shape != MB.shape:
        raise ValueError(f"shape mismatch {MA.shape} vs {MB.shape}")
    diff = MA - MB
    shift = float(np.median(np.diag(diff).real))
    residual = float(np.max(np.abs(diff - shift * np.eye(diff.shape[0]))))
    return shift, residual


def unitary_from_hermitian(G, theta: float) -> np.ndarray:
    """exp(i*theta*G) for Hermitian G, via eigendecomposition."""
    M = _as_matrix(G)
    require_hermitian(M)
    w, V = np.linalg.eigh(M)
    return (V * np.exp(1j * theta * w)) @ V.conj().T
