"""Block-decoupling transformation: generator, coefficients, cross-checks."""

from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from conftest import cavity_point, circuit_point
from rqed.couplings import cavity_couplings
from rqed.errors import ResonanceError
from rqed.hamiltonians import build_rqrm, build_circuit_rqrm
from rqed.hilbert import CompositeSpace, FockSpace
from rqed.linalg import difference_up_to_identity
from rqed.sw import (
    SWCoefficients,
    _split_operators,
    effective_from_sw,
    sw_coefficients,
    sw_generator,
    verify_generator,
)


def _space(couplings, n_a=12, n_ph=10):
    return CompositeSpace(atom=couplings.atom, fock=FockSpace(n_ph), n_a=n_a)


def test_generator_residual_cavity(cavity08):
    space = _space(cavity08)
    assert verify_generator(cavity08, space) < 1e-9


def test_generator_residual_circuit(circuit05):
    space = _space(circuit05)
    assert verify_generator(circuit05, space) < 1e-9


def test_generator_negative_control(cavity08):
    """A detuned generator must visibly fail the commutator condition."""
    space = _space(cavity08)
    wrong = dataclasses.replace(cavity08, omega_c=1.01 * cavity08.omega_c)
    H0p, _, HH = _split_operators(cavity08, space)
    S_bad = sw_generator(wrong, space)
    residual = np.max(np.abs(H0p @ S_bad - S_bad @ H0p + HH)) / np.max(np.abs(HH))
    assert residual > 1e-3


def test_generator_antihermitian(cavity08, circuit05):
    for c in (cavity08, circuit05):
        S = sw_generator(c, _space(c))
        assert np.max(np.abs(S + S.conj().T)) < 1e-12 * max(np.max(np.abs(S)), 1.0)


def test_generator_no_low_block(cavity08):
    """S has no matrix elements inside the two-level block."""
    space = _space(cavity08)
    S = sw_generator(cavity08, space)
    n_low = space.n_low
    assert np.max(np.abs(S[:n_low, :n_low])) == 0.0


def test_low_interaction_commutator_leaves_low_block(cavity08):
    """P [H^L, S] P = 0: the low interaction only feeds the cross block."""
    space = _space(cavity08)
    _, HL, _ = _split_operators(cavity08, space)
    S = sw_generator(cavity08, space)
    comm = HL @ S - S @ HL
    n_low = space.n_low
    scale = max(np.max(np.abs(comm)), 1e-300)
    assert np.max(np.abs(comm[:n_low, :n_low])) / scale < 1e-12


def test_coefficients_converged_flag(cavity08, circuit05):
    for c in (cavity08, circuit05):
        sw = sw_coefficients(c)
        assert sw.converged
        assert sw.l_max == 47


def test_coefficient_homogeneity(dw_atom):
    """Leading order: A, B scale as A0^2 and C, D as A0^3."""
    wc = 3.0 * float(dw_atom.omega[1])
    A0 = 1e-4
    s1 = sw_coefficients(cavity_couplings(dw_atom, wc, A0))
    s2 = sw_coefficients(cavity_couplings(dw_atom, wc, 2.0 * A0))
    np.testing.assert_allclose(s2.A, 4.0 * s1.A, rtol=1e-4)
    np.testing.assert_allclose(s2.B, 4.0 * s1.B, rtol=1e-4)
    np.testing.assert_allclose(s2.C, 8.0 * s1.C, rtol=1e-4)
    np.testing.assert_allclose(s2.D, 8.0 * s1.D, rtol=1e-4, atol=1e-30)


def test_coefficient_symmetry(cavity08):
    """A and B inherit the symmetry of g_jl g_lk; diagonal of D vanishes."""
    sw = sw_coefficients(cavity08)
    scale_A = np.max(np.abs(sw.A))
    scale_B = np.max(np.abs(sw.B))
    assert abs(sw.A[0, 1] - sw.A[1, 0]) < 1e-10 * scale_A
    assert abs(sw.B[0, 1] - sw.B[1, 0]) < 1e-10 * scale_B
    assert abs(sw.D[0, 0]) < 1e-12 * max(np.max(np.abs(sw.D)), 1e-300)


def test_zero_coefficients():
    z = SWCoefficients.zero()
    assert z.A_minus == z.B_plus == 0.0
    assert z.converged


def test_closed_form_matches_matrix_path_cavity(cavity08):
    """Coefficient formulas reproduce the explicit matrix construction."""
    space = _space(cavity08, n_a=12, n_ph=12)
    sw = sw_coefficients(cavity08, l_max=space.n_a - 1)
    H_matrix = effective_from_sw(space, cavity08)
    H_closed = build_rqrm(cavity08, sw, space.fock)
    shift, residual = difference_up_to_identity(H_matrix, H_closed)
    assert residual < 1e-8 * cavity08.omega_c


def test_closed_form_matches_matrix_path_circuit(circuit05):
    space = _space(circuit05, n_a=14, n_ph=12)
    sw = sw_coefficients(circuit05, l_max=space.n_a - 1)
    H_matrix = effective_from_sw(space, circuit05)
    H_closed = build_circuit_rqrm(circuit05, sw, space.fock)
    shift, residual = difference_up_to_identity(H_matrix, H_closed)
    assert residual < 1e-8 * circuit05.omega_c


def test_quadrature_rotation_maps_flavors(cavity08):
    """T = diag(i^n) on the photon factor turns the first-flavor generator
    into the second-flavor one built from the same numerical couplings."""
    space = _space(cavity08, n_a=8, n_ph=8)
    as_circuit = dataclasses.replace(cavity08, flavor="circuit")
    T = np.kron(np.eye(space.n_a), np.diag(1j ** np.arange(space.n_ph)))
    S_cav = sw_generator(cavity08, space)
    S_circ = sw_generator(as_circuit, space)
    assert np.max(np.abs(T @ S_cav @ T.conj().T - S_circ)) < 1e-12


def test_resonant_virtual_pair_rejected(dw_atom):
    """A resonator parked on a high-high transition poisons the generator.

    This resonance is invisible to the dispersive-ratio gate (which only
    monitors low-high transitions) and must be caught by the denominator
    check inside the generator itself.
    """
    c = cavity_point(dw_atom, 0.2)
    bad_wc = float(c.omega_prime[5] - c.omega_prime[3])
    clash = dataclasses.replace(c, omega_c=bad_wc)
    space = _space(clash, n_a=8, n_ph=6)
    with pytest.raises(ResonanceError):
        sw_generator(clash, space)


def test_l_max_validation(cavity08):
    with pytest.raises(ValueError):
        sw_coefficients(cavity08, l_max=1)
    with pytest.raises(ValueError):
        sw_coefficients(cavity08, l_max=cavity08.n_levels)
