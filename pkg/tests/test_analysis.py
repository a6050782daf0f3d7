"""Fits, closed forms, and the sweep driver."""
from __future__ import annotations

import math

import numpy as np
import pytest

from quench1d import (
    AnsatzFit,
    Boundary,
    ChainSpec,
    InitialStateKind,
    IntegratorConfig,
    Model,
    QuenchProtocol,
    backend_name,
    d_edge_closed_form,
    d_edge_leading_order,
    default_fit_window,
    dimer_profile,
    evolve,
    fidelity_formula,
    fit_ansatz,
    fit_power_law,
    initial_state,
    lzs_mode_data,
    lzs_return_bound,
    mode_distance,
    normalized_l1,
    reconstruct_profile,
    sweep,
    transport_summary,
)

FIT_TOL = 1e-12


def test_fit_power_law_exact_round_trip():
    betas = np.logspace(-4, -2, 8)
    falling = fit_power_law(betas, 2.0 * betas**-0.5, (betas[0], betas[-1]))
    assert falling.exponent == pytest.approx(0.5, abs=FIT_TOL)
    assert falling.sign == -1
    assert falling.prefactor == pytest.approx(2.0, rel=FIT_TOL)
    assert falling.r_squared >= 1.0 - FIT_TOL
    assert falling.slope == pytest.approx(-0.5, abs=FIT_TOL)
    rising = fit_power_law(betas, 0.3 * betas**0.7)
    assert rising.exponent == pytest.approx(0.7, abs=FIT_TOL)
    assert rising.sign == +1


def test_fit_power_law_window_excludes_contaminated_points():
    betas = np.logspace(-4, -1, 12)
    values = 1.7 * betas**-0.61
    corrupted = values.copy()
    corrupted[-3:] *= 5.0
    window = (betas[0], betas[8])
    fit = fit_power_law(betas, corrupted, window)
    assert fit.exponent == pytest.approx(0.61, abs=FIT_TOL)
    assert fit.window == window


def test_fit_power_law_validation():
    betas = np.logspace(-3, -2, 6)
    with pytest.raises(ValueError):
        fit_power_law(betas, np.ones(5))
    with pytest.raises(ValueError):
        fit_power_law(betas, np.ones(6), (1e-3, 1.3e-3))  # < 4 points inside
    with pytest.raises(ValueError):
        fit_power_law(betas, -np.ones(6))
    with pytest.raises(ValueError):
        fit_power_law(betas, np.ones(6), (1e-2, 1e-3))


def test_default_fit_window_drops_the_slow_end():
    betas = np.logspace(-4, -2, 12)
    lo, hi = default_fit_window(np.random.default_rng(0).permutation(betas))
    assert lo == pytest.approx(betas[0])
    assert hi == pytest.approx(betas[-3])
    with pytest.raises(ValueError):
        default_fit_window(betas[:5])


def test_fit_ansatz_round_trip_and_peak():
    c1, c2, c3 = 1.1, 0.6, 0.08
    beta = 1.0
    gaps = np.sqrt(np.linspace(0.01, 6.0, 40))
    probs = c3 * (1.0 - np.exp(-c1 * gaps**2)) * np.exp(-c2 * gaps**2)
    fit = fit_ansatz(gaps, probs, beta)
    assert fit.c1 == pytest.approx(c1, rel=1e-6)
    assert fit.c2 == pytest.approx(c2, rel=1e-6)
    assert fit.c3 == pytest.approx(c3, rel=1e-6)
    x = np.linspace(1e-4, 6.0, 200001)
    model = fit.c3 * (1.0 - np.exp(-fit.c1 * x)) * np.exp(-fit.c2 * x)
    assert fit.peak_location == pytest.approx(x[np.argmax(model)], abs=1e-4)
    with pytest.raises(ValueError):
        fit_ansatz(gaps[:3], probs[:3], beta)


def _high_precision_d(beta: float) -> float:
    # 50-digit evaluation of the defining expression; float arithmetic loses
    # ~7 digits to cancellation near beta = 1, this does not
    from decimal import Decimal, getcontext

    getcontext().prec = 50
    b = Decimal(beta)
    one = Decimal(1)
    inv = one / b.sqrt()
    acosh = (inv + (inv * inv - one).sqrt()).ln()
    bracket = (2 - b) / (one - b) * acosh - one / (one - b).sqrt()
    return float(bracket / (8 * b.sqrt()))


def test_edge_distance_closed_form():
    for beta in (1e-4, 1e-3, 1e-2, 0.3, 0.9, 1.0 - 1e-7):
        assert d_edge_closed_form(beta) == pytest.approx(
            _high_precision_d(beta), rel=1e-9
        )
    grid = np.logspace(-5, -0.1, 40)
    values = np.array([d_edge_closed_form(b) for b in grid])
    assert np.all(np.diff(values) < 0)  # slower ramps travel farther
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            d_edge_closed_form(bad)
        with pytest.raises(ValueError):
            d_edge_leading_order(bad)


def test_leading_order_limit():
    for beta, tol in ((1e-4, 0.03), (1e-6, 0.01), (1e-8, 1e-3)):
        ratio = d_edge_closed_form(beta) / d_edge_leading_order(beta)
        assert abs(ratio - 1.0) <= tol


def test_lzs_return_bound_hand_values():
    out = lzs_return_bound(np.array([0.25]), np.array([0.0]))
    assert out.bound == pytest.approx(0.25)
    assert out.signed == pytest.approx(0.25)
    out = lzs_return_bound(np.array([0.25, 0.25]), np.array([0.0, math.pi]))
    assert out.bound == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        lzs_return_bound(np.array([0.1, 0.2]), np.array([0.0]))
    with pytest.raises(ValueError):
        lzs_return_bound(np.array([-0.1]), np.array([0.0]))


def test_mode_distance():
    beta = 1e-3
    assert mode_distance(math.pi, beta) <= 1e-10  # band crossing carries nothing
    # trapezoid oracle over the post-crossing half of the ramp
    k = 2.0
    t = np.linspace(0.5 / beta, 1.0 / beta, 20001)
    j1 = beta * t
    j2 = 1.0 - j1
    eps = np.abs(j1 + j2 * np.exp(-1j * k))
    speeds = np.abs(j1 * j2 * np.sin(k) / eps)
    oracle = np.trapezoid(speeds, t)
    assert mode_distance(k, beta) == pytest.approx(oracle, rel=1e-6)


def test_normalized_l1_properties():
    a = np.array([0.2, 0.5, 0.3])
    assert normalized_l1(a, a) == 0.0
    assert normalized_l1(a, 7.0 * a) == pytest.approx(0.0, abs=FIT_TOL)
    disjoint = normalized_l1(np.array([1.0, 0.0]), np.array([0.0, 2.0]))
    assert disjoint == pytest.approx(2.0)
    with pytest.raises(ValueError):
        normalized_l1(a, a[:2])
    with pytest.raises(ValueError):
        normalized_l1(a, np.zeros(3))


def test_reconstruct_profile_conserves_mass():
    probs = np.array([0.3, 0.5])
    dists = np.array([10.0, 20.5])
    prof = reconstruct_profile(probs, dists, 5.0, 60)
    assert prof.p_plus.sum() == pytest.approx(probs.sum(), rel=FIT_TOL)
    assert prof.cells == 60
    assert np.all(prof.p_minus == 0.0)
    with pytest.raises(ValueError):
        reconstruct_profile(probs, dists, 0.0, 60)
    with pytest.raises(ValueError):
        reconstruct_profile(probs, dists[:1], 5.0, 60)


def test_fidelity_formula_limits():
    assert fidelity_formula(100, 1e-9) == pytest.approx(1.0, abs=1e-6)
    cutoff = 2.0 / (100**2 * math.log(2.0))
    assert fidelity_formula(100, cutoff * 1.001) == 0.0
    assert fidelity_formula(100, cutoff * 0.999) > 0.0
    with pytest.raises(ValueError):
        fidelity_formula(1, 1e-3)
    with pytest.raises(ValueError):
        fidelity_formula(100, 0.0)


def test_sweep_matches_individual_runs():
    spec = ChainSpec(Model.SSH, 20)
    betas = (0.05, 0.02)  # intentionally unsorted
    result = sweep(spec, QuenchProtocol.LINEAR, betas, InitialStateKind.SSH_LEFT_EDGE,
                   dt=0.01)
    assert [r.beta for r in result.rows] == list(betas)
    for row in result.rows:
        state = initial_state(spec, InitialStateKind.SSH_LEFT_EDGE)
        res = evolve(spec, QuenchProtocol.LINEAR, row.beta, state,
                     IntegratorConfig(dt=0.01))
        summary = transport_summary(dimer_profile(res.final, spec, QuenchProtocol.LINEAR))
        assert row.distance == summary.distance
        assert row.width == summary.width
        assert row.peak == summary.peak
        assert math.isnan(row.fidelity)  # odd-chain observable only
    assert result.meta["cells"] == 20
    assert result.meta["protocol"] == "linear"
    assert result.meta["backend"] == backend_name()
    assert result.meta["dt"] == 0.01


def test_sweep_workers_do_not_change_results():
    spec = ChainSpec(Model.SSH, 12)
    betas = (0.05, 0.03, 0.02)
    serial = sweep(spec, QuenchProtocol.LINEAR, betas, InitialStateKind.SSH_LEFT_EDGE,
                   dt=0.02)
    parallel = sweep(spec, QuenchProtocol.LINEAR, betas, InitialStateKind.SSH_LEFT_EDGE,
                     dt=0.02, workers=2)
    for a, b in zip(serial.rows, parallel.rows):
        assert (a.beta, a.distance, a.width, a.peak, a.return_prob) == (
            b.beta, b.distance, b.width, b.peak, b.return_prob
        )
        assert math.isnan(a.fidelity) and math.isnan(b.fidelity)
    with pytest.raises(ValueError):
        sweep(spec, QuenchProtocol.LINEAR, betas, InitialStateKind.SSH_LEFT_EDGE,
              workers=0)


def test_sweep_periodic_drive_has_no_profile_fields():
    spec = ChainSpec(Model.SSH, 12)
    rows = sweep(spec, QuenchProtocol.PERIODIC, (0.05,), InitialStateKind.SSH_LEFT_EDGE,
                 dt=0.02).rows
    assert math.isnan(rows[0].distance)
    assert rows[0].return_prob >= 0.0


def test_lzs_mode_data_shapes_and_phase_modes():
    cells, beta = 12, 0.05
    p, phi = lzs_mode_data(cells, beta, dt=0.05)
    assert p.shape == phi.shape == (cells - 1,)
    assert np.all(p >= 0.0) and p.sum() <= 1.0 + 1e-9
    p1, phi1 = lzs_mode_data(cells, beta, dt=0.05, doubled=False)
    np.testing.assert_allclose(p1, p, atol=FIT_TOL)
    np.testing.assert_allclose(phi, 2.0 * phi1, atol=FIT_TOL)
    p2, phi2 = lzs_mode_data(cells, beta, dt=0.05, phase_mode="analytic")
    np.testing.assert_allclose(phi2, 0.5 / beta, atol=FIT_TOL)
    np.testing.assert_allclose(p2, p, atol=FIT_TOL)
    with pytest.raises(ValueError):
        lzs_mode_data(cells, beta, phase_mode="nope")
    bound = lzs_return_bound(p, phi)
    assert 0.0 <= bound.bound <= 4.0


def test_ansatz_fit_dataclass_peak():
    fit = AnsatzFit(c1=1.0, c2=1.0, c3=1.0)
    assert fit.peak_location == pytest.approx(math.log(2.0))
