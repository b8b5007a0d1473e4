"""Composite atom (x) photon Hilbert spaces.

Basis ordering is atom-major: index = j * n_ph + n.  Quadratic photon
operators are built on a two-level padded Fock space and restricted, so
their matrix elements on the retained block are free of truncation-edge
artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atoms import AtomSpectrum
from .linalg import HermitianOperator


def _ladder(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n)), 1)


@dataclass(frozen=True)
class FockSpace:
    """Truncated photon mode with ladder operators and padded quadratics."""

    n_ph: int

    @property
    def a(self) -> np.ndarray:
        return _ladder(self.n_ph)

    @property
    def a_dag(self) -> np.ndarray:
        return _ladder(self.n_ph).T

    @property
    def number(self) -> np.ndarray:
        return np.diag(np.arange(float(self.n_ph)))

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.n_ph)

    # linear quadratures
    @property
    def a_minus_adag(self) -> np.ndarray:
        a = self.a
        return a - a.T

    @property
    def a_plus_adag(self) -> np.ndarray:
        a = self.a
        return a + a.T

    def _padded(self, build, pad: int = 2) -> np.ndarray:
        a = _ladder(self.n_ph + pad)
        return build(a, a.T)[: self.n_ph, : self.n_ph]

    # quadratic operators, exact on the retained block
    @property
    def quad_minus_sq(self) -> np.ndarray:
        """(a - a^dag)^2 without truncation-edge artifacts."""
        return self._padded(lambda a, ad: (a - ad) @ (a - ad))

    @property
    def quad_plus_sq(self) -> np.ndarray:
        """(a + a^dag)^2 without truncation-edge artifacts."""
        return self._padded(lambda a, ad: (a + ad) @ (a + ad))

    @property
    def squeeze_diff(self) -> np.ndarray:
        """a^2 - a^dag^2 without truncation-edge artifacts."""
        return self._padded(lambda a, ad: a @ a - ad @ ad)


@dataclass(frozen=True)
class CompositeSpace:
    """Atom (n_a retained levels) tensor photon (n_ph) space."""

    atom: AtomSpectrum
    fock: FockSpace
    n_a: int

    def __post_init__(self):
        if self.n_a < 2:
            raise ValueError("need at least two atomic levels")
        if self.n_a > self.atom.n_levels:
            raise ValueError(
                f"n_a={self.n_a} exceeds solved atomic levels {self.atom.n_levels}"
            )

    @property
    def n_ph(self) -> int:
        return self.fock.n_ph

    @property
    def dim(self) -> int:
        return self.n_a * self.n_ph

    @property
    def factor_dims(self) -> tuple[int, int]:
        return (self.n_a, self.n_ph)

    def atom_op(self, j: int, k: int) -> np.ndarray:
        """|j><k| on the atomic factor."""
        M = np.zeros((self.n_a, self.n_a))
        M[j, k] = 1.0
        return M

    def embed_atom(self, op_atom: np.ndarray) -> HermitianOperator:
        op = np.asarray(op_atom, dtype=complex)
        if op.shape != (self.n_a, self.n_a):
            raise ValueError(f"atomic operator shape {op.shape} != ({self.n_a},)*2")
        return HermitianOperator(np.kron(op, self.fock.identity), self.factor_dims)

    def embed_photon(self, op_ph: np.ndarray) -> HermitianOperator:
        op = np.asarray(op_ph, dtype=complex)
        if op.shape != (self.n_ph, self.n_ph):
            raise ValueError(f"photon operator shape {op.shape} != ({self.n_ph},)*2")
        return HermitianOperator(np.kron(np.eye(self.n_a), op), self.factor_dims)

    def build_projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """(P, Q): projector on span{|0>,|1>} (x) photons, and its complement."""
        if self.n_a < 3:
            raise ValueError("projector split needs n_a >= 3")
        P = np.zeros((self.dim, self.dim))
        P[: 2 * self.n_ph, : 2 * self.n_ph] = np.eye(2 * self.n_ph)
        return P, np.eye(self.dim) - P

    @property
    def n_low(self) -> int:
        """Dimension of the low-energy (two-level) block."""
        return 2 * self.n_ph


def top_fock_population(psi: np.ndarray, n_a: int, n_ph: int, n_top: int = 2) -> float:
    """Population of the highest ``n_top`` Fock levels of a state vector."""
    amp = np.asarray(psi).reshape(n_a, n_ph)
    return float(np.sum(np.abs(amp[:, n_ph - n_top :]) ** 2))
