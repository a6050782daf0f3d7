"""Fits and closed-form theory on top of the raw runs.

Contains the log-log power-law regression used for every scaling plot, the
two-crossing transition Ansatz fit, the closed-form edge travel distance,
the return-probability interference bound, rectangular wave-packet profile
reconstruction, the adiabatic-fidelity formula, and a deterministic sweep
driver that maps a list of beta values to observable rows.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import curve_fit

from ._backend import backend_name
from .evolve import IntegratorConfig, evolve
from .models import Boundary, ChainSpec, InitialStateKind, Model, initial_state
from .observables import (
    DimerProfile,
    adiabatic_fidelity,
    dimer_profile,
    has_dimer_profile,
    return_probability,
    transport_summary,
)
from .protocols import QuenchProtocol, schedule_at
from .spectrum import group_velocity, odd_chain_eigenstate


@dataclass(frozen=True)
class ScalingFit:
    """Power law value = prefactor * beta^(sign*exponent); exponent >= 0."""

    exponent: float
    sign: int
    prefactor: float
    window: tuple[float, float]
    r_squared: float

    @property
    def slope(self) -> float:
        return self.sign * self.exponent


@dataclass(frozen=True)
class AnsatzFit:
    """p = c3 (1 - e^{-c1 x}) e^{-c2 x} with x = gap^2/beta."""

    c1: float
    c2: float
    c3: float

    @property
    def peak_location(self) -> float:
        return math.log(1.0 + self.c1 / self.c2) / self.c1


@dataclass(frozen=True)
class LzsBound:
    """Interference estimate |2 sum p_k e^{i phi_k}|^2 and its signed variant."""

    bound: float
    signed: float


@dataclass(frozen=True)
class SweepRow:
    beta: float
    distance: float
    width: float
    peak: float
    return_prob: float
    fidelity: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    meta: dict


def default_fit_window(betas, drop_largest: int = 2) -> tuple[float, float]:
    """Window spanning all samples except the `drop_largest` biggest beta
    (the large-beta end falls below the power law and would bias the fit)."""
    b = np.sort(np.asarray(betas, float))
    if len(b) < drop_largest + 4:
        raise ValueError("too few samples to drop the large-beta end")
    return float(b[0]), float(b[-drop_largest - 1])


def fit_power_law(
    betas: np.ndarray, values: np.ndarray, window: tuple[float, float] | None = None
) -> ScalingFit:
    """OLS on (ln beta, ln value) restricted to the window; needs >= 4 points."""
    b = np.asarray(betas, float)
    y = np.asarray(values, float)
    if b.shape != y.shape or b.ndim != 1:
        raise ValueError("betas and values must be 1-D and equal length")
    if window is None:
        window = (float(b.min()), float(b.max()))
    lo, hi = window
    if not lo < hi:
        raise ValueError("fit window must satisfy beta_lo < beta_hi")
    keep = (b >= lo) & (b <= hi)
    b, y = b[keep], y[keep]
    if len(b) < 4:
        raise ValueError(f"need >= 4 samples in window, got {len(b)}")
    if np.any(b <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive beta and values")
    lx, ly = np.log(b), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    sstot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if sstot == 0.0 else 1.0 - float(np.sum(resid**2)) / sstot
    return ScalingFit(
        exponent=abs(float(slope)),
        sign=1 if slope >= 0 else -1,
        prefactor=float(np.exp(intercept)),
        window=(lo, hi),
        r_squared=r2,
    )


def fit_ansatz(gaps: np.ndarray, probs: np.ndarray, beta: float) -> AnsatzFit:
    """Nonlinear fit of mode transition probabilities against gap^2/beta."""
    x = np.asarray(gaps, float) ** 2 / beta
    p = np.asarray(probs, float)
    if x.shape != p.shape or len(x) < 4:
        raise ValueError("need matching gap/probability arrays with >= 4 points")

    def model(xx, c1, c2, c3):
        return c3 * (1.0 - np.exp(-c1 * xx)) * np.exp(-c2 * xx)

    p0 = (1.0, 1.0, float(p.max()) * math.e)
    try:
        popt, _ = curve_fit(
            model, x, p, p0=p0, bounds=(0.0, np.inf), maxfev=20000
        )
    except RuntimeError as exc:
        raise RuntimeError("transition-probability fit did not converge") from exc
    return AnsatzFit(c1=float(popt[0]), c2=float(popt[1]), c3=float(popt[2]))


def d_edge_closed_form(beta: float) -> float:
    """Closed-form edge travel distance; valid on 0 < beta < 1."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"closed form requires 0 < beta < 1, got {beta}")
    u = 1.0 - beta
    if u < 1e-6:
        # cancellation-safe expansion of the bracket near beta -> 1
        bracket = math.sqrt(u) * (4.0 + u) / 3.0
    else:
        bracket = (2.0 - beta) / u * math.acosh(1.0 / math.sqrt(beta)) - u**-0.5
    return bracket / (8.0 * math.sqrt(beta))


def d_edge_leading_order(beta: float) -> float:
    """Small-beta limit (ln(4/beta) - 1)/(8 sqrt(beta)) of the closed form."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"leading order requires 0 < beta < 1, got {beta}")
    return (math.log(4.0 / beta) - 1.0) / (8.0 * math.sqrt(beta))


def lzs_return_bound(p_k: np.ndarray, phi_k: np.ndarray) -> LzsBound:
    """|2 sum_k p_k e^{i phi_k}|^2 plus the signed (2 sum p_k cos phi_k)^2."""
    p = np.asarray(p_k, float)
    phi = np.asarray(phi_k, float)
    if p.shape != phi.shape:
        raise ValueError("p_k and phi_k must have equal length")
    if np.any(p < 0):
        raise ValueError("probabilities must be non-negative")
    z = 2.0 * np.sum(p * np.exp(1j * phi))
    s = 2.0 * np.sum(p * np.cos(phi))
    return LzsBound(bound=float(abs(z) ** 2), signed=float(s * s))


def lzs_mode_data(
    cells: int,
    beta: float,
    dt: float | None = None,
    doubled: bool = True,
    phase_mode: str = "overlap",
) -> tuple[np.ndarray, np.ndarray]:
    """Upper-band mode weights and phases of the edge state evolved to the
    fully dimerized point (the half-way state of the mirror-ramp drive).

    Returns (p_k, phi_k) over modes j = N+1..2N-1. The overlap argument is
    the phase accumulated from the avoided crossing up to the turning point;
    by mirror symmetry of the ramp, the phase between the two crossings is
    twice that, which is what the interference bound needs (doubled=True).
    phase_mode="analytic" replaces the phases by the flat estimate 1/(2 beta).
    """
    spec = ChainSpec(Model.SSH, cells, Boundary.OPEN_ODD)
    state = initial_state(spec, InitialStateKind.SSH_LEFT_EDGE)
    res = evolve(spec, QuenchProtocol.LINEAR, beta, state, IntegratorConfig(dt=dt))
    psi = res.final.amplitudes * math.exp(res.final.log_scale)
    p = np.empty(cells - 1)
    phi = np.empty(cells - 1)
    for i, j in enumerate(range(cells + 1, 2 * cells)):
        amp = np.vdot(odd_chain_eigenstate(j, 1.0, 0.0, cells), psi)
        p[i] = amp.real**2 + amp.imag**2
        phi[i] = math.atan2(amp.imag, amp.real)
    if phase_mode == "analytic":
        phi = np.full(cells - 1, 0.5 / beta)
    elif phase_mode == "overlap":
        if doubled:
            phi = 2.0 * phi
    else:
        raise ValueError(f"unknown phase_mode {phase_mode!r}")
    return p, phi


def mode_distance(k: float, beta: float, protocol: QuenchProtocol = QuenchProtocol.LINEAR) -> float:
    """Travel distance of mode k: integral of |v_k(t)| from the gap crossing
    (t = 1/(2 beta) on the linear ramp) to the end of the ramp."""

    def speed(t: float) -> float:
        c = schedule_at(protocol, beta, t)
        try:
            return abs(group_velocity(k, c.j1, c.j2))
        except ValueError:
            return 0.0

    t_mid, t_fin = 0.5 / beta, 1.0 / beta
    val, _ = quad(speed, t_mid, t_fin, limit=400)
    return float(val)


def normalized_l1(a: np.ndarray, b: np.ndarray) -> float:
    """L1 distance between the two curves after normalizing each to unit sum."""
    x = np.asarray(a, float)
    y = np.asarray(b, float)
    if x.shape != y.shape:
        raise ValueError("curves must share a grid")
    sx, sy = float(x.sum()), float(y.sum())
    if not (sx > 0 and sy > 0):
        raise ValueError("curves must have positive total weight")
    return float(np.abs(x / sx - y / sy).sum())


def reconstruct_profile(
    mode_probs: np.ndarray, mode_distances: np.ndarray, width: float, cells: int
) -> DimerProfile:
    """Sum of rectangular wave packets: each mode contributes height p_j/W
    over the W cells nearest n = 1 + d_j (rect equal to 1 on [-1/2, 1/2))."""
    if not width > 0:
        raise ValueError("width must be positive")
    p = np.asarray(mode_probs, float)
    d = np.asarray(mode_distances, float)
    if p.shape != d.shape:
        raise ValueError("mode probability/distance arrays must match")
    profile = np.zeros(cells)
    n = np.arange(1, cells + 1)
    for pj, dj in zip(p, d):
        box = (n - 1.0 - dj >= -width / 2.0) & (n - 1.0 - dj < width / 2.0)
        profile[box] += pj / width
    return DimerProfile(p_plus=profile, p_minus=np.zeros(cells))


def fidelity_formula(cells: int, beta: float) -> float:
    """F = [max(1 - 2 e^{-2/(N^2 beta)}, 0)]^2."""
    if cells < 2:
        raise ValueError("cells must be >= 2")
    if not beta > 0:
        raise ValueError("beta must be positive")
    return max(1.0 - 2.0 * math.exp(-2.0 / (cells**2 * beta)), 0.0) ** 2


# --- sweep driver ---------------------------------------------------------


def _sweep_one(task) -> SweepRow:
    spec, protocol, beta, kind, cell, dt = task
    state = initial_state(spec, kind, cell)
    final = evolve(spec, protocol, beta, state, IntegratorConfig(dt=dt)).final
    d = w = pk = float("nan")
    if has_dimer_profile(protocol):
        offset = cell if cell is not None else 0
        prof = dimer_profile(final, spec, protocol, beta=beta, offset=offset)
        summary = transport_summary(prof)
        d, w, pk = float(summary.distance), summary.width, summary.peak
    p1a = return_probability(final)
    fid = float("nan")
    if spec.model is Model.SSH and spec.boundary is Boundary.OPEN_ODD:
        fid = adiabatic_fidelity(final, spec)
    return SweepRow(beta=beta, distance=d, width=w, peak=pk, return_prob=p1a, fidelity=fid)


def sweep(
    spec: ChainSpec,
    protocol: QuenchProtocol,
    betas,
    kind: InitialStateKind,
    cell: int | None = None,
    dt: float | None = None,
    workers: int = 1,
) -> SweepResult:
    """Evolve once per beta and tabulate observables; deterministic.

    Fields that do not apply to the given protocol/geometry are NaN. Rows
    preserve the order of `betas`. workers > 1 distributes runs over
    processes (runs are independent); results are identical either way.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    tasks = [(spec, protocol, float(b), kind, cell, dt) for b in betas]
    if workers == 1 or len(tasks) <= 1:
        rows = tuple(_sweep_one(t) for t in tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = tuple(pool.map(_sweep_one, tasks))
    meta = {
        "model": spec.model.value,
        "boundary": spec.boundary.value,
        "cells": spec.unit_cells,
        "gamma": spec.gamma,
        "protocol": protocol.value,
        "initial": kind.value,
        "cell": cell,
        "dt": dt if dt is not None else "auto",
        "workers": workers,
        "backend": backend_name(),
    }
    return SweepResult(rows=rows, meta=meta)
