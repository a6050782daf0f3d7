"""Final-state measurements: dimer-basis profiles and the scalar summaries
(travel distance, width, peak, return probability, fidelity) fitted by the
scaling analysis.

Profiles are reported per unit cell n = 1..N in the dimer basis of the
final Hamiltonian: (|n,A> + s|n,B>)/sqrt(2) with s = +-1 for the Hermitian
chains, and the gamma-dependent non-orthogonal pair for the lossy chain,
whose probabilities additionally carry the e^{-gamma/beta} rescale that
makes different beta comparable on one plot.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import Boundary, ChainSpec, Model
from .protocols import QuenchProtocol
from .state import StateVector

# protocols whose final state has no meaningful per-cell dimer decomposition
_NO_PROFILE = (QuenchProtocol.PERIODIC, QuenchProtocol.CREUTZ_THETA)


def has_dimer_profile(protocol: QuenchProtocol) -> bool:
    """Whether the protocol ends in a state dimer_profile can decompose."""
    return protocol not in _NO_PROFILE


@dataclass(frozen=True)
class DimerProfile:
    """Cell-resolved probabilities p_plus[n-1], p_minus[n-1], n = 1..N.

    offset re-origins the n axis (bulk runs put the initial cell at 0);
    rescale_log records any global log-factor already folded into the
    probabilities (e.g. -gamma/beta for the lossy chain).
    """

    p_plus: np.ndarray
    p_minus: np.ndarray
    offset: int = 0
    rescale_log: float = 0.0

    def __post_init__(self) -> None:
        p, q = np.asarray(self.p_plus, float), np.asarray(self.p_minus, float)
        if p.shape != q.shape or p.ndim != 1:
            raise ValueError("p_plus and p_minus must be 1-D and equal length")
        if np.any(p < 0) or np.any(q < 0):
            raise ValueError("probabilities must be non-negative")
        object.__setattr__(self, "p_plus", p)
        object.__setattr__(self, "p_minus", q)

    @property
    def cells(self) -> int:
        return len(self.p_plus)


@dataclass(frozen=True)
class TransportSummary:
    distance: int
    width: float
    peak: float
    peak_cell: int


def dimer_profile(
    state: StateVector,
    spec: ChainSpec,
    protocol: QuenchProtocol | None = None,
    beta: float | None = None,
    offset: int = 0,
) -> DimerProfile:
    """Project a final state onto the per-cell dimer pair.

    For the lossy chain beta is required: probabilities are multiplied by
    e^{-gamma/beta} (recorded in rescale_log) on top of e^{2 log_scale}.
    """
    if protocol in _NO_PROFILE:
        raise ValueError(f"{protocol.value} does not end in a dimerized Hamiltonian")
    a = state.amplitudes[0::2]
    b = state.amplitudes[1::2]
    if spec.boundary is Boundary.OPEN_ODD:
        b = np.concatenate([b, [0.0]])  # cell N has no B site
    rescale_log = 0.0
    if spec.model is Model.NH_SSH:
        if beta is None:
            raise ValueError("beta is required to rescale lossy-chain probabilities")
        rescale_log = -spec.gamma / beta
        root = math.sqrt(1.0 - spec.gamma**2)
        cp = complex(root, spec.gamma)   # conj of  +root - i*gamma
        cm = complex(-root, spec.gamma)  # conj of  -root - i*gamma
        plus = (a + cp * b) / math.sqrt(2)
        minus = (a + cm * b) / math.sqrt(2)
    else:
        plus = (a + b) / math.sqrt(2)
        minus = (a - b) / math.sqrt(2)
    factor = math.exp(2.0 * state.log_scale + rescale_log)
    return DimerProfile(
        p_plus=np.abs(plus) ** 2 * factor,
        p_minus=np.abs(minus) ** 2 * factor,
        offset=offset,
        rescale_log=rescale_log,
    )


def cell_occupancy(state: StateVector, spec: ChainSpec) -> np.ndarray:
    """Per-cell |psi_A|^2 + |psi_B|^2 (true scale); basis-free summary used
    where no dimer decomposition applies (e.g. the flat-band angle quench)."""
    a = state.amplitudes[0::2]
    b = state.amplitudes[1::2]
    if spec.boundary is Boundary.OPEN_ODD:
        b = np.concatenate([b, [0.0]])
    return (np.abs(a) ** 2 + np.abs(b) ** 2) * math.exp(2.0 * state.log_scale)


def transport_summary(profile: DimerProfile) -> TransportSummary:
    """Peak position, travel distance |n_max - offset|, width, and height.

    The width is the standard deviation of p_plus normalized to unit sum,
    centered on the peak cell; ties at the maximum resolve to the smallest n.
    """
    p = profile.p_plus
    total = float(p.sum())
    if not total > 0.0:
        raise ValueError("transport summary of an all-zero profile")
    n_max = int(np.argmax(p)) + 1
    n = np.arange(1, profile.cells + 1)
    w = math.sqrt(float(np.sum((n - n_max) ** 2 * p) / total))
    return TransportSummary(
        distance=abs(n_max - profile.offset),
        width=w,
        peak=float(p[n_max - 1]),
        peak_cell=n_max,
    )


def return_probability(state: StateVector) -> float:
    """p_{1,A} = |<1,A|psi>|^2 at true scale."""
    amp = state.amplitudes[0]
    return float((amp.real**2 + amp.imag**2) * math.exp(2.0 * state.log_scale))


def adiabatic_fidelity(state: StateVector, spec: ChainSpec) -> float:
    """F = |<N,A|psi>|^2 on the odd open chain (the opposite-edge site)."""
    if spec.model is not Model.SSH or spec.boundary is not Boundary.OPEN_ODD:
        raise ValueError("fidelity is defined for the odd open SSH chain")
    amp = state.amplitudes[-1]
    return float((amp.real**2 + amp.imag**2) * math.exp(2.0 * state.log_scale))


def collapse_rescale(
    profile: DimerProfile, beta: float, nu_d: float = 0.61, nu_p: float = 0.61
) -> tuple[np.ndarray, np.ndarray]:
    """Axes-rescaled curve ((n-offset)*beta^nu_d, p_plus*beta^-nu_p) for overlays."""
    n = np.arange(1, profile.cells + 1) - profile.offset
    return n * beta**nu_d, profile.p_plus * beta ** (-nu_p)
