"""Analytic spectra and eigenstates for the SSH-family chains.

The odd open chain (N cells, 2N-1 sites: A sites n=1..N, B sites n=1..N-1)
admits closed-form eigenpairs: 2N-2 extended modes at energies
-+ |J1 + J2 e^{-ik_j}| with k_j = pi*j/N, plus one exact zero mode living
on the A sublattice with amplitude (-J1/J2)^{n-1}. Periodic chains reduce
to 2x2 Bloch blocks. Everything here is pure-function and array-valued.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .models import ChainSpec, Model, build_hamiltonian
from .protocols import QuenchProtocol, schedule_at
from .state import StateVector

_MAX_DENSE_SITES = 2000


@dataclass(frozen=True)
class ExtendedModeTable:
    """Mode table indexed j=1..2N-1 (ascending energy; index N is the zero mode).

    k[j-1] = pi*j/N, energy[j-1] = eps_j, phase[j-1] = arg(J1+J2 e^{-ik_j}),
    gap[j-1] = |cos(k_j/2)|, the gap to the zero mode at the J1=J2=1/2 crossing.
    """

    j1: float
    j2: float
    cells: int
    k: np.ndarray
    energy: np.ndarray
    phase: np.ndarray
    gap: np.ndarray

    @property
    def modes(self) -> int:
        return 2 * self.cells - 1


@dataclass(frozen=True)
class BlochBlock:
    k: float
    energy: float  # eps_k >= 0; bands at -+eps_k
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    degenerate: bool


def _regime_ok(j1: float, j2: float) -> bool:
    # closed forms hold for couplings of the same sign (or one of them zero)
    return j1 * j2 > 0 or j1 == 0 or j2 == 0


def odd_chain_spectrum(j1: float, j2: float, cells: int) -> ExtendedModeTable:
    """All 2N-1 eigenvalues of the odd open chain, sorted ascending."""
    if cells < 2:
        raise ValueError("cells must be >= 2")
    if not _regime_ok(j1, j2):
        raise ValueError(
            "closed-form spectrum needs J1, J2 of the same sign (or zero); "
            "diagonalize build_hamiltonian directly for mixed signs"
        )
    N = cells
    j = np.arange(1, 2 * N)
    k = math.pi * j / N
    h = j1 + j2 * np.exp(-1j * k)
    energy = np.where(j < N, -np.abs(h), np.abs(h))
    energy[N - 1] = 0.0
    phase = np.angle(h)
    gap = np.abs(np.cos(k / 2))
    return ExtendedModeTable(j1=j1, j2=j2, cells=N, k=k, energy=energy, phase=phase, gap=gap)


def odd_chain_eigenstate(j: int, j1: float, j2: float, cells: int) -> np.ndarray:
    """Normalized eigenstate j (1-based, ascending energy) on the 2N-1 sites."""
    N = cells
    if not 1 <= j <= 2 * N - 1:
        raise ValueError(f"mode index {j} outside 1..{2 * N - 1}")
    if not _regime_ok(j1, j2):
        raise ValueError("closed-form eigenstates need J1, J2 of the same sign")
    psi = np.zeros(2 * N - 1, dtype=np.complex128)
    n = np.arange(1, N + 1)
    if j == N:
        psi[0::2] = _edge_envelope(j1, j2, N)
        return psi
    k = math.pi * j / N
    phi = cmath.phase(complex(j1 + j2 * math.cos(k), -j2 * math.sin(k)))
    sign = -1.0 if j < N else 1.0
    psi[0::2] = sign * np.sin(n * k + phi) / math.sqrt(N)
    psi[1::2] = np.sin(n[:-1] * k) / math.sqrt(N)
    return psi


def _edge_envelope(j1: float, j2: float, N: int) -> np.ndarray:
    """A-sublattice zero-mode amplitudes (-J1/J2)^{n-1}, normalized.

    Written in terms of the smaller ratio so neither r^{2N} nor its inverse
    overflows; the |J1|=|J2| limit is the uniform profile 1/sqrt(N).
    """
    n = np.arange(N)
    if j2 == 0.0:
        if j1 == 0.0:
            raise ValueError("edge mode undefined at J1=J2=0")
        # limit of the mirrored form below: exactly localized on (N, A)
        env = np.where(n == N - 1, (-math.copysign(1.0, j1)) ** (N - 1), 0.0)
        return env.astype(np.complex128)
    r = -j1 / j2
    a = abs(r)
    if a == 1.0:
        env = np.sign(r) ** n / math.sqrt(N)
    elif a < 1.0:
        env = r**n * math.sqrt((1 - a * a) / (1 - a ** (2 * N)))
    else:
        s = 1.0 / a
        env = np.sign(r) ** n * s ** (N - 1 - n) * math.sqrt((1 - s * s) / (1 - s ** (2 * N)))
    return env.astype(np.complex128)


def project_extended(state: StateVector, j1: float, j2: float, cells: int) -> np.ndarray:
    """p_j = |<psi_j|psi>|^2 e^{2 log_scale} for all 2N-1 odd-chain modes.

    Entry j-1 corresponds to mode j of odd_chain_spectrum; entry N-1 is the
    zero mode. For Hermitian runs the entries sum to 1.
    """
    N = cells
    if state.sites != 2 * N - 1:
        raise ValueError(f"state has {state.sites} sites, odd chain needs {2 * N - 1}")
    p = np.empty(2 * N - 1)
    scale = math.exp(2.0 * state.log_scale)
    for j in range(1, 2 * N):
        amp = np.vdot(odd_chain_eigenstate(j, j1, j2, N), state.amplitudes)
        p[j - 1] = (amp.real**2 + amp.imag**2) * scale
    return p


def bloch_block(k: float, j1: float, j2: float) -> BlochBlock:
    """Eigenvectors of the 2x2 momentum block [[0, h], [h*, 0]], h = J1+J2 e^{-ik}."""
    h = complex(j1 + j2 * math.cos(k), -j2 * math.sin(k))
    eps = abs(h)
    if eps <= 1e-12 * max(abs(j1) + abs(j2), 1e-300):
        return BlochBlock(
            k=k,
            energy=0.0,
            psi_plus=np.array([1.0, 0.0], dtype=np.complex128),
            psi_minus=np.array([0.0, 1.0], dtype=np.complex128),
            degenerate=True,
        )
    # component on A chosen real positive
    u = np.conj(h) / eps
    plus = np.array([1.0, u], dtype=np.complex128) / math.sqrt(2)
    minus = np.array([1.0, -u], dtype=np.complex128) / math.sqrt(2)
    return BlochBlock(k=k, energy=eps, psi_plus=plus, psi_minus=minus, degenerate=False)


def group_velocity(k: float, j1: float, j2: float) -> float:
    """v_k = J1 J2 sin(k) / eps_k of the upper band."""
    blk = bloch_block(k, j1, j2)
    if blk.degenerate:
        raise ValueError(f"group velocity undefined at the band crossing k={k}")
    return j1 * j2 * math.sin(k) / blk.energy


def instantaneous_spectrum(
    spec: ChainSpec, protocol: QuenchProtocol, beta: float, t: float
) -> np.ndarray:
    """Dense eigenvalues of H(t), ascending (by real part when complex)."""
    if spec.sites > _MAX_DENSE_SITES:
        raise ValueError(f"{spec.sites} sites exceeds dense-diagonalization guard")
    h = build_hamiltonian(spec, schedule_at(protocol, beta, t)).toarray()
    if spec.model is Model.NH_SSH:
        ev = np.linalg.eigvals(h)
        ev = ev[np.lexsort((ev.imag, ev.real))]
        # drop numerically-zero imaginary parts so real spectra come out real
        if np.max(np.abs(ev.imag)) < 1e-12:
            return ev.real
        return ev
    return np.linalg.eigvalsh(h)


def spectrum_trace(
    spec: ChainSpec, protocol: QuenchProtocol, beta: float, times: np.ndarray
) -> np.ndarray:
    """Stacked instantaneous spectra, shape (len(times), sites); for figures."""
    rows = [instantaneous_spectrum(spec, protocol, beta, float(t)) for t in times]
    return np.vstack([np.asarray(r, dtype=np.complex128) for r in rows])
