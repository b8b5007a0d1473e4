"""Numerical toolkit for renormalized two-level models of cavity and
circuit QED: full-model construction, Schrieffer-Wolff renormalization,
resolvent effective eigenproblems, driven dynamics and accuracy metrics.
"""

from __future__ import annotations

from .atoms import (
    AtomSpectrum,
    DoubleWellParams,
    FluxoniumParams,
    double_well_from_gamma,
    double_well_grid,
    grid_representation,
    solve_double_well,
    solve_fluxonium,
    solve_potential_1d,
)
from .couplings import (
    CouplingSet,
    a0_from_target_g,
    cavity_couplings,
    circuit_couplings,
    l2_from_target_g,
)
from .dynamics import (
    DriveSpec,
    ProjectedModel,
    Trajectory,
    evolve,
    gaussian_drive,
    project_low_energy,
    quadrature_trace,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DispersiveRegimeError,
    InstabilityError,
    NonHermitianError,
    NotPositiveSemidefiniteError,
    NumericalError,
    PoleError,
    ResonanceError,
)
from .hamiltonians import (
    ModelTag,
    bogoliubov_rqrm,
    build_circuit_full,
    build_circuit_qrm,
    build_circuit_rqrm,
    build_full_coulomb,
    build_full_dipole,
    build_full_dipole_grid,
    build_full_eta,
    build_gauge_truncated,
    build_qrm_dipole,
    build_qrm_eta,
    build_rqrm,
    build_rqrm_simplified,
)
from .hilbert import CompositeSpace, FockSpace
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    SpectrumResult,
    eigh,
    eigvalsh,
    kron,
    partial_trace,
    psd_sqrt,
    unitary_from_hermitian,
)
from .metrics import ComparisonReport, eigenstate_infidelity, fidelity, mse_sigma
from .resolvent import ResolventConfig, ResolventSolver, selfconsistent_transitions
from .sw import SWCoefficients, effective_from_sw, sw_coefficients, sw_generator, verify_generator

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
