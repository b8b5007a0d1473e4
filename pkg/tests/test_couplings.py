from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from conftest import cavity_point, circuit_point
from rqed.couplings import (
    a0_from_target_g,
    cavity_couplings,
    circuit_couplings,
    l2_from_target_g,
)
from rqed.errors import DispersiveRegimeError, ResonanceError


def test_cavity_target_g_inversion(dw_atom):
    c = cavity_point(dw_atom, 0.8)
    assert abs(abs(c.g[0, 1]) / c.omega_c - 0.8) < 1e-12
    assert c.flavor == "cavity"


def test_circuit_target_g_inversion(flux_atom):
    c = circuit_point(flux_atom, 0.5)
    assert abs(abs(c.g[0, 1]) / c.omega_c - 0.5) < 1e-12
    assert c.flavor == "circuit"


def test_cavity_scaling_laws(dw_atom):
    """g is linear and G quadratic in the vector-potential amplitude."""
    wc = 3.0 * float(dw_atom.omega[1])
    A0 = a0_from_target_g(0.2 * wc, wc, 1.0, dw_atom.x_mat[0, 1])
    c1 = cavity_couplings(dw_atom, wc, A0)
    c2 = cavity_couplings(dw_atom, wc, 2.0 * A0)
    np.testing.assert_allclose(c2.g, 2.0 * c1.g)
    np.testing.assert_allclose(c2.G, 4.0 * c1.G)


def test_cavity_couplings_proportional_to_matrix_elements(dw_atom):
    wc = 3.0 * float(dw_atom.omega[1])
    c = cavity_couplings(dw_atom, wc, 0.05)
    np.testing.assert_allclose(c.g, wc * 0.05 * dw_atom.x_mat)
    np.testing.assert_allclose(c.G, (wc * 0.05) ** 2 * dw_atom.x2_mat)


def test_circuit_g_closed_form(flux_atom):
    """g_01 = phi_01 sqrt(w_c / 2 L2) with the matched resonator capacitance."""
    wc = 3.0 * float(flux_atom.omega[1])
    L2 = l2_from_target_g(0.4 * wc, wc, flux_atom.x_mat[0, 1])
    c = circuit_couplings(flux_atom, wc, L2)
    expect = flux_atom.x_mat[0, 1] * np.sqrt(wc / (2.0 * L2))
    assert abs(c.g[0, 1] - expect) < 1e-12 * abs(expect)


def test_dressed_frequencies(cavity08):
    """Low levels keep bare frequencies; high levels absorb G_ll / w_c."""
    atom = cavity08.atom
    np.testing.assert_allclose(cavity08.omega_prime[:2], atom.omega[:2])
    shift = np.diag(cavity08.G)[2:] / cavity08.omega_c
    np.testing.assert_allclose(cavity08.omega_prime[2:], atom.omega[2:] + shift)


def test_delta_definition(cavity08):
    w = cavity08.omega_prime
    expect = (w[:, None] - w[None, :]) ** 2 - cavity08.omega_c**2
    np.testing.assert_allclose(cavity08.Delta, expect)


def test_omega_bar_10(cavity08):
    atom = cavity08.atom
    expect = atom.omega[1] + (cavity08.G[1, 1] - cavity08.G[0, 0]) / cavity08.omega_c
    assert cavity08.omega_bar_10 == pytest.approx(expect)


def test_dispersive_gate(dw_atom):
    c = cavity_point(dw_atom, 0.8)
    assert c.ensure_dispersive() < 0.5
    # a resonator parked right at a low-high transition is rejected
    strained = dataclasses.replace(
        c, g=c.g * 50.0
    )
    with pytest.raises(DispersiveRegimeError):
        strained.ensure_dispersive()


def test_resonance_rejection(dw_atom):
    """Resonator tuned onto the 1->2 dressed transition trips the gate."""
    w12 = float(dw_atom.omega[2] - dw_atom.omega[1])
    with pytest.raises(ResonanceError):
        # tiny A0 so the quadratic dressing barely moves the levels
        cavity_couplings(dw_atom, w12, 1e-9)


def test_inversion_input_validation(dw_atom):
    with pytest.raises(ValueError):
        a0_from_target_g(1.0, 2.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        l2_from_target_g(1.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        l2_from_target_g(-1.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        cavity_couplings(dw_atom, -1.0, 0.1)
    with pytest.raises(ValueError):
        circuit_couplings(dw_atom, 1.0, -1.0)
