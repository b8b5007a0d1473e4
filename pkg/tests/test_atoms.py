"""Grid-solver tests, anchored by an independent Numerov shooting oracle."""

from __future__ import annotations

import numpy as np
import pytest

from rqed.atoms import (
    DoubleWellParams,
    FluxoniumParams,
    double_well_from_gamma,
    grid_representation,
    sinc_dvr_kinetic,
    sinc_dvr_momentum,
    solve_double_well,
    solve_fluxonium,
    solve_potential_1d,
)


# ---------------------------------------------------------------------------
# Numerov shooting oracle (independent of the sinc-DVR path under test)
# ---------------------------------------------------------------------------

def _numerov_match(E, V, m, parity, x_max, n_steps):
    """Integrate y'' = 2m(V-E)y inward from the forbidden tail to x=0.

    Returns the parity-matching defect at the origin: for an even state the
    ghost point y(-h) must equal y(h); for an odd state y(0) must vanish.
    The defect changes sign exactly at eigenvalues of that parity.
    """
    h = x_max / n_steps
    x = np.linspace(0.0, x_max, n_steps + 1)
    f = 2.0 * m * (V(x) - E)
    c = 1.0 - (h * h / 12.0) * f

    y_far = 0.0
    y_near = 1e-280
    # inward recurrence: index runs n_steps -> 0
    y = np.empty(n_steps + 1)
    y[n_steps] = y_far
    y[n_steps - 1] = y_near
    for n in range(n_steps - 1, 0, -1):
        y[n - 1] = ((12.0 - 10.0 * c[n]) * y[n] - c[n + 1] * y[n + 1]) / c[n - 1]
        if abs(y[n - 1]) > 1e200:
            y[n - 1 :] /= 1e200
    if parity == "odd":
        return y[0] / max(np.max(np.abs(y)), 1e-300)
    # even: Numerov step centered at 0 with a symmetric ghost point y(-h)=y(h)
    defect = (12.0 - 10.0 * c[0]) * y[0] - 2.0 * c[1] * y[1]
    return defect / max(np.max(np.abs(y)), 1e-300)


def numerov_levels(V, m, parity, n_want, E_lo, E_hi, x_max=8.0,
                   n_steps=8000, n_scan=600):
    """Lowest ``n_want`` eigenvalues of given parity by scan + bisection."""
    Es = np.linspace(E_lo, E_hi, n_scan)
    vals = np.array([_numerov_match(E, V, m, parity, x_max, n_steps) for E in Es])
    roots = []
    for i in range(len(Es) - 1):
        if vals[i] == 0.0:
            roots.append(Es[i])
        elif vals[i] * vals[i + 1] < 0:
            a, b = Es[i], Es[i + 1]
            fa = vals[i]
            for _ in range(100):
                mid = 0.5 * (a + b)
                fm = _numerov_match(mid, V, m, parity, x_max, n_steps)
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
                if b - a < 1e-13 * max(abs(a), 1.0):
                    break
            roots.append(0.5 * (a + b))
        if len(roots) == n_want:
            break
    if len(roots) < n_want:
        raise RuntimeError(f"found only {len(roots)}/{n_want} {parity} levels")
    return np.array(roots)


@pytest.mark.slow
def test_double_well_ratio_against_numerov_oracle(dw_atom):
    """omega_21/omega_10 of the gamma=60 double well to 1e-8."""
    params = double_well_from_gamma(60.0)
    V, m = params.potential(), params.m
    v_min = float(np.min(V(np.linspace(0, 3, 4000))))
    even = numerov_levels(V, m, "even", 2, v_min, 6.0)
    odd = numerov_levels(V, m, "odd", 1, v_min, 6.0)
    E0, E2 = even
    E1 = odd[0]
    assert E0 < E1 < E2
    ratio_oracle = (E2 - E1) / (E1 - E0)
    ratio_dvr = float(dw_atom.omega[2] - dw_atom.omega[1]) / float(dw_atom.omega[1])
    assert abs(ratio_dvr / ratio_oracle - 1.0) < 1e-8


# ---------------------------------------------------------------------------
# analytic harmonic-oscillator checks
# ---------------------------------------------------------------------------

def test_harmonic_oscillator_analytics():
    omega = 1.7
    spec = solve_potential_1d(1.0, lambda x: 0.5 * omega**2 * x**2, n_levels=10)
    np.testing.assert_allclose(spec.omega, omega * np.arange(10), atol=1e-9)
    x01 = 1.0 / np.sqrt(2.0 * omega)
    assert abs(abs(spec.x_mat[0, 1]) - x01) < 1e-9
    # <n|x^2|n> = (n + 1/2)/omega
    np.testing.assert_allclose(
        np.diag(spec.x2_mat), (np.arange(10) + 0.5) / omega, atol=1e-9
    )
    # x only connects neighbors
    off = spec.x_mat.copy()
    off[np.abs(np.subtract.outer(np.arange(10), np.arange(10))) == 1] = 0.0
    assert np.max(np.abs(off)) < 1e-9


def test_fluxonium_harmonic_limit():
    """E_J = 0 reduces fluxonium to an oscillator at sqrt(8 E_C E_L)."""
    p = FluxoniumParams(E_C=1.3, E_L=0.4, E_J=0.0, phi_ext=0.0)
    spec = solve_fluxonium(p, n_levels=8)
    omega = np.sqrt(8.0 * p.E_C * p.E_L)
    np.testing.assert_allclose(spec.omega, omega * np.arange(8), rtol=1e-9)


# ---------------------------------------------------------------------------
# matrix-element cross checks
# ---------------------------------------------------------------------------

def test_double_well_parity_selection(dw_atom):
    """Even potential: x couples only opposite-parity levels."""
    # parity of level k alternates even/odd from the ground state up only in
    # single wells; infer parity per level from the x2 diagonal coupling rule
    # instead: <j|x|k> must vanish whenever <j|x^2|k> does not (j != k), and
    # vice versa, because x is parity-odd and x^2 parity-even.
    n = 12
    x = np.abs(dw_atom.x_mat[:n, :n])
    x2 = np.abs(dw_atom.x2_mat[:n, :n])
    scale_x = np.max(x)
    scale_x2 = np.max(x2)
    for j in range(n):
        for k in range(j + 1, n):
            both = (x[j, k] > 1e-8 * scale_x) and (x2[j, k] > 1e-8 * scale_x2)
            assert not both, (j, k, x[j, k], x2[j, k])


def test_fluxonium_sweet_spot_parity(flux_atom_sym):
    """At phi_ext = pi the potential is reflection-symmetric about 0."""
    x = np.abs(flux_atom_sym.x_mat[:8, :8])
    x2 = np.abs(flux_atom_sym.x2_mat[:8, :8])
    for j in range(8):
        for k in range(j + 1, 8):
            assert not (x[j, k] > 1e-7 * np.max(x) and x2[j, k] > 1e-7 * np.max(x2))


def test_fluxonium_biased_breaks_parity(flux_atom):
    """Off the sweet spot both phi_01 and Phi_01 are nonzero."""
    assert abs(flux_atom.x_mat[0, 1]) > 1e-3
    assert abs(flux_atom.x2_mat[0, 1]) > 1e-3


def test_hellmann_feynman_x2(dw_atom):
    """dE_n/d(beta) = -<n|x^2|n> for V = alpha x^4 - beta x^2."""
    params = double_well_from_gamma(60.0)
    meta = dw_atom.grid_meta
    eps = 1e-6

    def levels(beta):
        V = lambda x: params.alpha * x**4 - beta * x**2
        g = grid_representation(params.m, V, meta["n_points"], meta["half_width"])
        return np.linalg.eigvalsh(g.hamiltonian())[:6]

    dE = (levels(params.beta + eps) - levels(params.beta - eps)) / (2 * eps)
    expected = -np.diag(dw_atom.x2_mat)[:6]
    # absolute energies share a common grid so the subtraction is clean
    np.testing.assert_allclose(dE, expected, rtol=1e-5, atol=1e-7)


# ---------------------------------------------------------------------------
# solver plumbing
# ---------------------------------------------------------------------------

def test_dvr_operator_identities():
    n, dx, m = 64, 0.1, 1.3
    T = sinc_dvr_kinetic(n, dx, m)
    P = sinc_dvr_momentum(n, dx)
    assert np.max(np.abs(T - T.T)) == 0.0
    assert np.max(np.abs(P - P.conj().T)) < 1e-14
    # action on a band-limited, grid-localized Gaussian reproduces the
    # analytic derivatives to near machine precision
    x = dx * np.arange(n)
    x0, sig = x[n // 2], 0.4
    f = np.exp(-((x - x0) ** 2) / (2 * sig**2))
    d1 = -(x - x0) / sig**2 * f
    d2 = (((x - x0) / sig**2) ** 2 - 1.0 / sig**2) * f
    assert np.max(np.abs(P @ f - (-1j) * d1)) < 1e-8
    assert np.max(np.abs(T @ f - (-d2) / (2.0 * m))) < 1e-8


def test_grid_metadata_and_convergence(dw_atom):
    meta = dw_atom.grid_meta
    assert meta["converged"] is True
    assert meta["edge_amplitude"] < 1e-12
    assert dw_atom.omega[0] == 0.0
    assert np.all(np.diff(dw_atom.omega) > 0)


def test_solver_input_validation():
    with pytest.raises(ValueError):
        solve_potential_1d(1.0, lambda x: x**2, n_levels=10, n_points=30)
    with pytest.raises(ValueError):
        double_well_from_gamma(-1.0)
    with pytest.raises(ValueError):
        DoubleWellParams(m=1.0, alpha=-0.1, beta=1.0)
    with pytest.raises(ValueError):
        FluxoniumParams(E_C=0.0, E_L=1.0, E_J=1.0, phi_ext=0.0)
    with pytest.raises(ValueError):
        FluxoniumParams(E_C=1.0, E_L=1.0, E_J=-1.0, phi_ext=0.0)


def test_from_ghz_scaling():
    p = FluxoniumParams.from_ghz(2.5, 0.5, 9.0, np.pi)
    assert abs(p.E_C - 2 * np.pi * 2.5) < 1e-12
    assert abs(p.mass - 1.0 / (8.0 * p.E_C)) < 1e-15


def test_omega_jk_antisymmetry(dw_atom):
    w = dw_atom.omega_jk()
    assert np.max(np.abs(w + w.T)) == 0.0
    assert abs(w[1, 0] - dw_atom.omega[1]) == 0.0
