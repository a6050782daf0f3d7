"""Quench schedules: coupling values as functions of time for each drive.

Every protocol is parametrized by a rate beta > 0 and runs from t = 0 to
t_end(protocol, beta). All SSH drives start deep in one dimerized limit
(J1, J2) = (0, 1) and cross the gap closing at J1 = J2; the Creutz drives
start at (M, K) = (0, 1) with a flat band (theta = -pi/2) and either ramp
M against K or rotate theta through zero.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .models import CouplingSet, Model

_T_EPS = 1e-9  # tolerance for t slightly outside [0, t_end] from rounding


class QuenchProtocol(enum.Enum):
    LINEAR = "linear"
    SINUSOIDAL = "sinusoidal"
    SUDDEN = "sudden"
    PERIODIC = "periodic"
    NH_LINEAR = "nh_linear"
    CREUTZ_MK = "creutz_mk"
    CREUTZ_THETA = "creutz_theta"


def protocol_model(protocol: QuenchProtocol) -> Model:
    """The chain model a protocol drives."""
    if protocol in (QuenchProtocol.CREUTZ_MK, QuenchProtocol.CREUTZ_THETA):
        return Model.CREUTZ
    if protocol is QuenchProtocol.NH_LINEAR:
        return Model.NH_SSH
    return Model.SSH


def t_end(protocol: QuenchProtocol, beta: float) -> float:
    _check_beta(beta)
    if protocol is QuenchProtocol.SINUSOIDAL:
        return math.pi / (2 * beta)
    if protocol is QuenchProtocol.PERIODIC:
        return 2.0 / beta
    if protocol is QuenchProtocol.CREUTZ_THETA:
        return math.pi / beta
    return 1.0 / beta


def schedule_at(protocol: QuenchProtocol, beta: float, t: float) -> CouplingSet:
    """Instantaneous couplings at time t in [0, t_end]."""
    _check_beta(beta)
    end = t_end(protocol, beta)
    if not -_T_EPS * end <= t <= (1 + _T_EPS) * end:
        raise ValueError(f"t={t} outside [0, {end}] for {protocol.value}")

    if protocol in (QuenchProtocol.LINEAR, QuenchProtocol.NH_LINEAR):
        u = beta * t
        return CouplingSet.ssh(u, 1.0 - u)
    if protocol is QuenchProtocol.SINUSOIDAL:
        s = math.sin(beta * t)
        return CouplingSet.ssh(s * s, 1.0 - s * s)
    if protocol is QuenchProtocol.SUDDEN:
        return CouplingSet.ssh(0.5, 0.5)
    if protocol is QuenchProtocol.PERIODIC:
        u = beta * t
        if u <= 1.0:
            return CouplingSet.ssh(u, 1.0 - u)
        return CouplingSet.ssh(2.0 - u, u - 1.0)
    if protocol is QuenchProtocol.CREUTZ_MK:
        u = beta * t
        return CouplingSet.creutz(u, 1.0 - u, -math.pi / 2)
    if protocol is QuenchProtocol.CREUTZ_THETA:
        return CouplingSet.creutz(0.0, 1.0, beta * t - math.pi / 2)
    raise ValueError(f"unknown protocol {protocol}")


def schedule_arrays(
    protocol: QuenchProtocol, beta: float, times: np.ndarray
) -> tuple[np.ndarray, ...]:
    """Vectorized schedule_at: (j1, j2) arrays for SSH drives, (m, k, theta)
    for Creutz drives. Agrees with schedule_at pointwise."""
    _check_beta(beta)
    t = np.asarray(times, dtype=np.float64)
    u = beta * t
    if protocol in (QuenchProtocol.LINEAR, QuenchProtocol.NH_LINEAR):
        return u, 1.0 - u
    if protocol is QuenchProtocol.SINUSOIDAL:
        s = np.sin(u) ** 2
        return s, 1.0 - s
    if protocol is QuenchProtocol.SUDDEN:
        half = np.full_like(t, 0.5)
        return half, half.copy()
    if protocol is QuenchProtocol.PERIODIC:
        j1 = np.where(u <= 1.0, u, 2.0 - u)
        return j1, 1.0 - j1
    if protocol is QuenchProtocol.CREUTZ_MK:
        return u, 1.0 - u, np.full_like(t, -math.pi / 2)
    if protocol is QuenchProtocol.CREUTZ_THETA:
        return np.zeros_like(t), np.ones_like(t), u - math.pi / 2
    raise ValueError(f"unknown protocol {protocol}")


def _check_beta(beta: float) -> None:
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError(f"beta must be positive and finite, got {beta}")
