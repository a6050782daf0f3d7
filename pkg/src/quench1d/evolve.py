"""Time evolution: fixed-step RK4 integration of i dpsi/dt = H(t) psi.

The integrator runs over the full protocol window [0, t_end]. The requested
step is shrunk to the nearest exact divisor of the window, couplings are
tabulated once on the half-step grid the RK4 stages need, and the state is
renormalized whenever its stored norm leaves [0.5, 2], folding the factor
into StateVector.log_scale. That bookkeeping is what keeps non-Hermitian
runs (true norm ~ e^{gamma/beta}) inside double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import rk4_creutz, rk4_ssh
from .models import Boundary, ChainSpec, Model
from .protocols import QuenchProtocol, protocol_model, schedule_arrays, t_end
from .state import StateVector

# Half of the 1e-8 norm-accounting budget, spent on integrator drift; the
# RK4 norm error of one step is ~ (lam*dt)^6/144 in the stored norm.
_DRIFT_BUDGET = 5e-9
_T_EPS = 1e-9


@dataclass(frozen=True)
class IntegratorConfig:
    """dt=None lets default_dt pick a step from the schedule's spectral radius."""

    dt: float | None = None
    snapshot_times: tuple[float, ...] = ()
    tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if self.dt is not None and not (0.0 < self.dt <= 0.1):
            raise ValueError("dt must lie in (0, 0.1]")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "snapshot_times", tuple(float(s) for s in self.snapshot_times))


@dataclass(frozen=True)
class EvolveResult:
    final: StateVector
    snapshots: tuple[StateVector, ...] = ()
    dt: float = 0.0  # step actually used (requested dt shrunk to divide the window)


def spectral_radius(spec: ChainSpec, protocol: QuenchProtocol, beta: float) -> float:
    """Max instantaneous |E| over the schedule (Bloch-band bound)."""
    samples = np.linspace(0.0, t_end(protocol, beta), 33)
    if spec.model is Model.CREUTZ:
        m, k, th = schedule_arrays(protocol, beta, samples)
        kk = np.linspace(0.0, math.pi, 65)[None, :]
        m, k, th = m[:, None], k[:, None], th[:, None]
        band = np.abs(2.0 * k * np.cos(kk) * np.cos(th)) + np.sqrt(
            4.0 * k**2 * np.sin(kk) ** 2 * np.sin(th) ** 2 + (m + 2.0 * k * np.cos(kk)) ** 2
        )
        return float(np.max(band))
    j1, j2 = schedule_arrays(protocol, beta, samples)
    return float(np.max(np.abs(j1) + np.abs(j2))) + spec.gamma


def default_dt(spec: ChainSpec, protocol: QuenchProtocol, beta: float) -> float:
    """dt = min(0.01/max(1,10*gamma), drift cap); the cap keeps the total
    stored-norm drift of a Hermitian run under _DRIFT_BUDGET."""
    lam = max(spectral_radius(spec, protocol, beta), 1e-6)
    window = t_end(protocol, beta)
    base = 0.01 / max(1.0, 10.0 * spec.gamma)
    cap = (144.0 * _DRIFT_BUDGET / (window * lam**6)) ** 0.2
    return min(base, cap, 0.1)


def evolve(
    spec: ChainSpec,
    protocol: QuenchProtocol,
    beta: float,
    initial: StateVector,
    cfg: IntegratorConfig | None = None,
) -> EvolveResult:
    """Integrate the full window; snapshots land on the nearest step boundary."""
    if cfg is None:
        cfg = IntegratorConfig()
    if initial.sites != spec.sites:
        raise ValueError(f"state has {initial.sites} sites, chain has {spec.sites}")
    if (protocol_model(protocol) is Model.CREUTZ) != (spec.model is Model.CREUTZ):
        raise ValueError(f"protocol {protocol.value} does not drive a {spec.model.value} chain")
    nrm = initial.stored_norm()
    if not 0.5 <= nrm <= 2.0:
        raise ValueError(f"initial stored norm {nrm} outside [0.5, 2]")

    window = t_end(protocol, beta)
    dt_req = cfg.dt if cfg.dt is not None else default_dt(spec, protocol, beta)
    n_steps = max(1, math.ceil(window / dt_req - 1e-12))
    dt = window / n_steps

    snap_idx = []
    for ts in cfg.snapshot_times:
        if not -_T_EPS * window <= ts <= (1.0 + _T_EPS) * window:
            raise ValueError(f"snapshot time {ts} outside [0, {window}]")
        snap_idx.append(min(n_steps, int(round(ts / dt))))

    half_t = np.linspace(0.0, window, 2 * n_steps + 1)
    creutz = spec.model is Model.CREUTZ
    if creutz:
        m_arr, k_arr, th_arr = schedule_arrays(protocol, beta, half_t)
        ct, st = np.cos(th_arr), np.sin(th_arr)
    else:
        j1_arr, j2_arr = schedule_arrays(protocol, beta, half_t)
    periodic = spec.boundary is Boundary.PERIODIC
    odd = spec.boundary is Boundary.OPEN_ODD

    psi = initial.amplitudes.copy()
    log_scale = initial.log_scale
    recorded: dict[int, StateVector] = {}
    pos = 0
    for idx in sorted(set(snap_idx) | {n_steps}):
        nseg = idx - pos
        if nseg > 0:
            lo, hi = 2 * pos, 2 * idx + 1
            if creutz:
                log_scale += rk4_creutz(
                    psi, m_arr[lo:hi], k_arr[lo:hi], ct[lo:hi], st[lo:hi], dt, nseg, periodic
                )
            else:
                log_scale += rk4_ssh(
                    psi, j1_arr[lo:hi], j2_arr[lo:hi], spec.gamma, dt, nseg, odd, periodic
                )
            if not np.all(np.isfinite(psi)):
                raise FloatingPointError(
                    f"non-finite amplitudes at t={idx * dt:g}; dt={dt:g} too large"
                )
            pos = idx
        recorded[idx] = StateVector(psi.copy(), log_scale=log_scale, time=idx * dt)

    final = recorded[n_steps].with_time(window)
    return EvolveResult(final=final, snapshots=tuple(recorded[i] for i in snap_idx), dt=dt)


def convergence_check(
    spec: ChainSpec,
    protocol: QuenchProtocol,
    beta: float,
    initial: StateVector,
    dt: float,
) -> float:
    """Max component difference between runs at dt and dt/2, in units of the
    larger final scale factor (so non-Hermitian growth cannot overflow)."""
    if not (math.isfinite(dt) and 0.0 < dt <= 0.1):
        raise ValueError(f"dt must lie in (0, 0.1], got {dt}")
    coarse = evolve(spec, protocol, beta, initial, IntegratorConfig(dt=dt)).final
    fine = evolve(spec, protocol, beta, initial, IntegratorConfig(dt=dt / 2)).final
    ref = max(coarse.log_scale, fine.log_scale)
    a = coarse.amplitudes * math.exp(coarse.log_scale - ref)
    b = fine.amplitudes * math.exp(fine.log_scale - ref)
    return float(np.max(np.abs(a - b)))
