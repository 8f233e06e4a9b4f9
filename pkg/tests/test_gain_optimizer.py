"""Fixed-frequency gain optimization: closed form, realized configs, TTD."""

import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import dmabeam as db

F_C = 15e9


def test_closed_form_gain_formula(design):
    phi, f = 0.21, 14.2e9
    s = db.dirichlet_kernel(design, phi, f)
    assert db.closed_form_gain(design, phi, f) == pytest.approx(
        (design.n_elements + abs(s)) ** 2 / 4.0, rel=1e-14)


def test_solved_config_attains_closed_form(design):
    """Constructed resonances realize the analytic optimum exactly."""
    rng = np.random.default_rng(42)
    for _ in range(25):
        phi = rng.uniform(-np.pi / 3, np.pi / 3)
        f_t = rng.uniform(12e9, 18e9)
        sol = db.solve_p1a(design, phi, f_t)
        realized = db.gain_dma(design, sol.resonant, phi, f_t)
        assert realized == pytest.approx(sol.gain, rel=1e-9)


def test_peak_gain_at_integer_product(design):
    op = db.optimal_operating_freq(design, np.radians(-18.0))
    sol = db.solve_p1a(design, np.radians(-18.0), op.f_t_star)
    assert sol.gain == pytest.approx(64.0, rel=1e-12)
    assert db.gain_dma(design, sol.resonant, np.radians(-18.0), op.f_t_star) \
        == pytest.approx(64.0, rel=1e-9)


def test_optimal_shifted_phases_wrap_and_progression(design):
    phi, f_t = 0.17, 14.7e9
    shifted = db.optimal_shifted_phases(design, phi, f_t)
    assert np.all(shifted >= -1.5 * np.pi) and np.all(shifted < 0.5 * np.pi)
    # consecutive angles advance by the phase slope 2 pi p, modulo 2 pi
    p = db.normalized_product(design, phi, f_t)
    steps = np.diff(shifted)
    wrapped = np.angle(np.exp(1j * (steps - 2 * np.pi * p)))
    np.testing.assert_allclose(wrapped, 0.0, atol=1e-9)


def test_degenerate_middle_element_is_realized():
    """Odd N with a negative array sum pins one weight at the circle's zero.

    The solver retreats that element just inside the interval: the
    configuration is feasible, the weight is ~0 and the realized gain
    matches the closed form to a few parts in 1e6.
    """
    design = db.DmaDesign(n_elements=3, spacing=1.0 / 120.0, refractive_index=2.5,
                          damping=2 * np.pi * F_C / 50, coupling=1e-9,
                          f_min=12e9, f_max=18e9)
    phi = np.radians(-50.0)
    f_t = 12e9
    assert db.dirichlet_kernel(design, phi, f_t) < 0
    sol = db.solve_p1a(design, phi, f_t)
    w_mid = db.beamformer_weight(design, sol.resonant.f_r[1], f_t)
    assert abs(w_mid) < 1e-6
    realized = db.gain_dma(design, sol.resonant, phi, f_t)
    assert realized == pytest.approx(sol.gain, rel=1e-5)
    assert realized <= sol.gain * (1 + 1e-12)


def test_solver_beats_random_feasible_configs(design):
    """Optimality certificate: no sampled Lorentzian config does better."""
    rng = np.random.default_rng(3)
    phi, f_t = 0.42, 13.3e9
    sol = db.solve_p1a(design, phi, f_t)
    h = db.effective_channel(design, phi, f_t).entries
    f_r = rng.uniform(0.3 * f_t, 3.0 * f_t, size=(10_000, design.n_elements))
    w = db.beamformer_weight(design, f_r, f_t)
    gains = np.abs(w @ h) ** 2
    assert gains.max() <= sol.gain * (1 + 1e-9)


def test_solve_p1a_rejects_out_of_band(design):
    with pytest.raises(db.DomainError):
        db.solve_p1a(design, 0.0, 11e9)
    with pytest.raises(db.DomainError):
        db.solve_p1a(design, 0.0, 19e9)


def test_infeasible_sliver_raises_with_element_index():
    """A low-Q guide has angles where some element has no real resonance."""
    lowq = db.DmaDesign(n_elements=8, spacing=1.0 / 120.0, refractive_index=2.5,
                        damping=2 * np.pi * F_C / 5, coupling=1e-9,
                        f_min=12e9, f_max=18e9)
    with pytest.raises(db.InfeasibleElementError) as err:
        db.solve_p1a(lowq, np.radians(-60.0), 14e9)
    assert err.value.index == 2


def test_gain_dma_checks_config_length(design):
    cfg = db.ResonantConfig(np.full(3, 15e9))
    with pytest.raises(db.DomainError):
        db.gain_dma(design, cfg, 0.0, 15e9)


@given(x=st.floats(-30.0, 30.0))
@settings(max_examples=100)
def test_wrap_shifted_is_2pi_periodic(x):
    lo, hi = -1.5 * np.pi, 0.5 * np.pi
    w = float(db.wrap_shifted(x))
    assert lo <= w < hi
    assert float(db.wrap_shifted(x + 2 * np.pi)) == pytest.approx(w, abs=1e-9)
    d = float(np.remainder(x - w, 2 * np.pi))
    assert min(d, 2 * np.pi - d) < 1e-9


def test_ttd_delays_non_negative(design):
    for phi in (-0.8, -0.1, 0.0, 0.3, 1.1):
        sol = db.solve_ttd(design.n_elements, design.spacing, phi)
        assert np.all(sol.delays >= 0.0)


def test_ttd_gain_is_squint_free(design):
    """Matched delays give N^2 at every frequency, including off-band."""
    rng = np.random.default_rng(11)
    phi = np.radians(-25.0)
    sol = db.solve_ttd(design.n_elements, design.spacing, phi)
    for f in rng.uniform(10e9, 20e9, size=50):
        g = db.gain_ttd(sol, design.spacing, phi, f)
        assert g == pytest.approx(design.n_elements ** 2, rel=1e-9)


def test_ttd_gain_drops_off_target(design):
    sol = db.solve_ttd(design.n_elements, design.spacing, 0.3)
    assert db.gain_ttd(sol, design.spacing, 0.5, 15e9) < 0.9 * design.n_elements ** 2


def test_solution_is_immutable(design):
    sol = db.solve_p1a(design, 0.1, 15e9)
    with pytest.raises(dataclasses.FrozenInstanceError):
        sol.gain = 0.0
