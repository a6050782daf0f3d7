"""Drive schedules: windows, endpoint values, and array/scalar agreement."""
from __future__ import annotations

import math

import numpy as np
import pytest

from quench1d import (
    Model,
    QuenchProtocol,
    protocol_model,
    schedule_arrays,
    schedule_at,
    t_end,
)

BETA = 0.2
TOL = 1e-12

SSH_DRIVES = (
    QuenchProtocol.LINEAR,
    QuenchProtocol.SINUSOIDAL,
    QuenchProtocol.SUDDEN,
    QuenchProtocol.PERIODIC,
    QuenchProtocol.NH_LINEAR,
)


def test_window_lengths():
    assert t_end(QuenchProtocol.LINEAR, BETA) == pytest.approx(1 / BETA)
    assert t_end(QuenchProtocol.NH_LINEAR, BETA) == pytest.approx(1 / BETA)
    assert t_end(QuenchProtocol.SUDDEN, BETA) == pytest.approx(1 / BETA)
    assert t_end(QuenchProtocol.CREUTZ_MK, BETA) == pytest.approx(1 / BETA)
    assert t_end(QuenchProtocol.SINUSOIDAL, BETA) == pytest.approx(math.pi / (2 * BETA))
    assert t_end(QuenchProtocol.PERIODIC, BETA) == pytest.approx(2 / BETA)
    assert t_end(QuenchProtocol.CREUTZ_THETA, BETA) == pytest.approx(math.pi / BETA)


def test_ssh_drives_start_dimerized_and_end_swapped():
    for protocol in (QuenchProtocol.LINEAR, QuenchProtocol.NH_LINEAR,
                     QuenchProtocol.SINUSOIDAL):
        c0 = schedule_at(protocol, BETA, 0.0)
        c1 = schedule_at(protocol, BETA, t_end(protocol, BETA))
        assert (c0.j1, c0.j2) == pytest.approx((0.0, 1.0), abs=TOL)
        assert (c1.j1, c1.j2) == pytest.approx((1.0, 0.0), abs=TOL)


def test_linear_midpoint_is_the_gap_closing():
    c = schedule_at(QuenchProtocol.LINEAR, BETA, 0.5 / BETA)
    assert c.j1 == pytest.approx(0.5, abs=TOL)
    assert c.j2 == pytest.approx(0.5, abs=TOL)


def test_sinusoidal_quarter_point():
    c = schedule_at(QuenchProtocol.SINUSOIDAL, BETA, math.pi / (4 * BETA))
    assert c.j1 == pytest.approx(0.5, abs=TOL)  # sin^2(pi/4)


def test_sudden_is_constant():
    for t in (0.0, 1.7, 1 / BETA):
        c = schedule_at(QuenchProtocol.SUDDEN, BETA, t)
        assert (c.j1, c.j2) == (0.5, 0.5)


def test_periodic_drive_mirrors_at_the_turning_point():
    end = t_end(QuenchProtocol.PERIODIC, BETA)
    turn = schedule_at(QuenchProtocol.PERIODIC, BETA, end / 2)
    assert (turn.j1, turn.j2) == pytest.approx((1.0, 0.0), abs=TOL)
    back = schedule_at(QuenchProtocol.PERIODIC, BETA, end)
    assert (back.j1, back.j2) == pytest.approx((0.0, 1.0), abs=TOL)
    for dt in (0.3, 0.9, 2.1):
        up = schedule_at(QuenchProtocol.PERIODIC, BETA, end / 2 - dt)
        down = schedule_at(QuenchProtocol.PERIODIC, BETA, end / 2 + dt)
        assert up.j1 == pytest.approx(down.j1, abs=TOL)
        assert up.j2 == pytest.approx(down.j2, abs=TOL)


def test_creutz_drives():
    c0 = schedule_at(QuenchProtocol.CREUTZ_MK, BETA, 0.0)
    c1 = schedule_at(QuenchProtocol.CREUTZ_MK, BETA, 1 / BETA)
    assert (c0.m, c0.k, c0.theta) == pytest.approx((0.0, 1.0, -math.pi / 2))
    assert (c1.m, c1.k, c1.theta) == pytest.approx((1.0, 0.0, -math.pi / 2))
    t0 = schedule_at(QuenchProtocol.CREUTZ_THETA, BETA, 0.0)
    t1 = schedule_at(QuenchProtocol.CREUTZ_THETA, BETA, math.pi / BETA)
    assert (t0.m, t0.k, t0.theta) == pytest.approx((0.0, 1.0, -math.pi / 2))
    assert (t1.m, t1.k, t1.theta) == pytest.approx((0.0, 1.0, math.pi / 2))


def test_schedule_arrays_agree_with_scalar_version():
    rng = np.random.default_rng(3)
    for protocol in QuenchProtocol:
        end = t_end(protocol, BETA)
        times = np.sort(rng.uniform(0.0, end, size=17))
        arrays = schedule_arrays(protocol, BETA, times)
        for i, t in enumerate(times):
            c = schedule_at(protocol, BETA, float(t))
            if protocol_model(protocol) is Model.CREUTZ:
                point = (c.m, c.k, c.theta)
            else:
                point = (c.j1, c.j2)
            for arr, val in zip(arrays, point):
                assert arr[i] == pytest.approx(val, abs=TOL), protocol.value


def test_time_window_is_enforced():
    end = t_end(QuenchProtocol.LINEAR, BETA)
    with pytest.raises(ValueError):
        schedule_at(QuenchProtocol.LINEAR, BETA, -0.01)
    with pytest.raises(ValueError):
        schedule_at(QuenchProtocol.LINEAR, BETA, end * 1.01)
    # rounding slack: a hair outside the window is accepted
    schedule_at(QuenchProtocol.LINEAR, BETA, end * (1 + 1e-10))


def test_beta_must_be_positive_and_finite():
    for bad in (0.0, -1.0, float("inf"), float("nan")):
        with pytest.raises(ValueError):
            t_end(QuenchProtocol.LINEAR, bad)
        with pytest.raises(ValueError):
            schedule_at(QuenchProtocol.LINEAR, bad, 0.0)
        with pytest.raises(ValueError):
            schedule_arrays(QuenchProtocol.LINEAR, bad, np.array([0.0]))


def test_protocol_model_mapping():
    for protocol in SSH_DRIVES:
        expected = Model.NH_SSH if protocol is QuenchProtocol.NH_LINEAR else Model.SSH
        assert protocol_model(protocol) is expected
    assert protocol_model(QuenchProtocol.CREUTZ_MK) is Model.CREUTZ
    assert protocol_model(QuenchProtocol.CREUTZ_THETA) is Model.CREUTZ
