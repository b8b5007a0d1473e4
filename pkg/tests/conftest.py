"""Shared fixtures: expensive atom solves and standard parameter points."""

from __future__ import annotations

import numpy as np
import pytest

from rqed import (
    FluxoniumParams,
    cavity_couplings,
    circuit_couplings,
    a0_from_target_g,
    l2_from_target_g,
    double_well_from_gamma,
    solve_double_well,
    solve_fluxonium,
)


@pytest.fixture(scope="session")
def dw_atom():
    """Double-well atom at the reference anharmonicity."""
    return solve_double_well(double_well_from_gamma(60.0), n_levels=48)


@pytest.fixture(scope="session")
def flux_atom():
    """Fluxonium atom at the reference bias (broken parity)."""
    params = FluxoniumParams.from_ghz(2.5, 0.5, 9.0, 49 * np.pi / 50)
    return solve_fluxonium(params, n_levels=48)


@pytest.fixture(scope="session")
def flux_atom_sym():
    """Fluxonium at the parity-symmetric sweet spot."""
    params = FluxoniumParams.from_ghz(2.5, 0.5, 9.0, np.pi)
    return solve_fluxonium(params, n_levels=48)


def cavity_point(atom, g_over_wc: float, wc_over_w10: float = 3.0):
    wc = wc_over_w10 * float(atom.omega[1])
    A0 = a0_from_target_g(g_over_wc * wc, wc, 1.0, atom.x_mat[0, 1])
    return cavity_couplings(atom, wc, A0)


def circuit_point(atom, g_over_wc: float, wc_over_w10: float = 3.0):
    wc = wc_over_w10 * float(atom.omega[1])
    L2 = l2_from_target_g(g_over_wc * wc, wc, atom.x_mat[0, 1])
    return circuit_couplings(atom, wc, L2)


@pytest.fixture(scope="session")
def cavity08(dw_atom):
    return cavity_point(dw_atom, 0.8)


@pytest.fixture(scope="session")
def circuit05(flux_atom):
    return circuit_point(flux_atom, 0.5)
