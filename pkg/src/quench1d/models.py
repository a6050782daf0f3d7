"""Chain models: site basis, Hamiltonian construction, and initial states.

Three two-band models on N unit cells of (A, B) sites, stored interleaved:
site 2n-1 is (n, A), site 2n is (n, B) (1-based). The SSH chain couples
J1 within a cell and J2 between (n, B) and (n+1, A); the non-Hermitian
variant adds +i*gamma / -i*gamma on the A / B diagonal (not conjugated);
the Creutz ladder carries an overall minus sign, vertical hops M, cross
hops K, and horizontal hops K e^{+i theta} (A sublattice, forward) /
K e^{-i theta} (B sublattice).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .state import StateVector


class Model(enum.Enum):
    SSH = "ssh"
    CREUTZ = "creutz"
    NH_SSH = "nh_ssh"


class Boundary(enum.Enum):
    OPEN_EVEN = "open_even"
    OPEN_ODD = "open_odd"
    PERIODIC = "periodic"


class InitialStateKind(enum.Enum):
    SSH_LEFT_EDGE = "ssh_left_edge"
    SSH_BULK = "ssh_bulk"
    CREUTZ_PLAQUETTE = "creutz_plaquette"
    CREUTZ_LEFT_EDGE = "creutz_left_edge"


@dataclass(frozen=True)
class ChainSpec:
    """Which model on which geometry, plus static parameters."""

    model: Model
    unit_cells: int
    boundary: Boundary = Boundary.OPEN_EVEN
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if self.unit_cells < 2:
            raise ValueError("unit_cells must be >= 2")
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise ValueError("gamma must be finite and >= 0")
        if self.gamma != 0.0 and self.model is not Model.NH_SSH:
            raise ValueError("gamma is only meaningful for NH_SSH")
        if self.boundary is Boundary.OPEN_ODD and self.model is not Model.SSH:
            raise ValueError("OPEN_ODD is only defined for the SSH model")

    @property
    def sites(self) -> int:
        n = 2 * self.unit_cells
        return n - 1 if self.boundary is Boundary.OPEN_ODD else n


@dataclass(frozen=True)
class SiteIndex:
    """(cell, sublattice) with the linearized 1-based position."""

    cell: int
    sublattice: str

    def __post_init__(self) -> None:
        if self.sublattice not in ("A", "B"):
            raise ValueError("sublattice must be 'A' or 'B'")
        if self.cell < 1:
            raise ValueError("cell index is 1-based")

    @property
    def linear(self) -> int:
        return 2 * self.cell - 1 if self.sublattice == "A" else 2 * self.cell

    def array_index(self, spec: ChainSpec) -> int:
        """0-based position in the amplitude vector; validates existence."""
        s = self.linear
        if self.cell > spec.unit_cells or s > spec.sites:
            raise ValueError(f"site {self} does not exist on this chain")
        return s - 1


@dataclass(frozen=True)
class CouplingSet:
    """Instantaneous couplings; SSH uses (j1, j2), Creutz uses (m, k, theta)."""

    j1: float = 0.0
    j2: float = 0.0
    m: float = 0.0
    k: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("j1", "j2", "m", "k", "theta"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"coupling {name} must be finite")

    @classmethod
    def ssh(cls, j1: float, j2: float) -> "CouplingSet":
        return cls(j1=j1, j2=j2)

    @classmethod
    def creutz(cls, m: float, k: float, theta: float) -> "CouplingSet":
        return cls(m=m, k=k, theta=theta)


def _check_coupling_model(spec: ChainSpec, c: CouplingSet) -> None:
    if spec.model is Model.CREUTZ:
        if c.j1 != 0.0 or c.j2 != 0.0:
            raise ValueError("Creutz chain got SSH couplings")
    else:
        if c.m != 0.0 or c.k != 0.0 or c.theta != 0.0:
            raise ValueError("SSH-family chain got Creutz couplings")


@lru_cache(maxsize=128)
def _hamiltonian(spec: ChainSpec, couplings: CouplingSet) -> sp.csr_matrix:
    N = spec.unit_cells
    S = spec.sites
    rows: list[int] = []
    cols: list[int] = []
    vals: list[complex] = []

    def add(i: int, j: int, v: complex) -> None:
        rows.append(i)
        cols.append(j)
        vals.append(v)
        if i != j:
            rows.append(j)
            cols.append(i)
            vals.append(np.conj(v))

    if spec.model in (Model.SSH, Model.NH_SSH):
        j1, j2 = couplings.j1, couplings.j2
        n_b = N - 1 if spec.boundary is Boundary.OPEN_ODD else N
        for n in range(1, n_b + 1):  # J1: (n,A)-(n,B)
            add(2 * n - 2, 2 * n - 1, j1)
        for n in range(1, N):  # J2: (n,B)-(n+1,A)
            add(2 * n - 1, 2 * n, j2)
        if spec.boundary is Boundary.PERIODIC:
            add(2 * N - 1, 0, j2)  # (N,B)-(1,A) wrap
        if spec.model is Model.NH_SSH and spec.gamma != 0.0:
            for n in range(1, N + 1):
                rows.append(2 * n - 2)
                cols.append(2 * n - 2)
                vals.append(1j * spec.gamma)
                rows.append(2 * n - 1)
                cols.append(2 * n - 1)
                vals.append(-1j * spec.gamma)
    else:
        m, k, th = couplings.m, couplings.k, couplings.theta
        ph = complex(np.cos(th), np.sin(th))  # e^{+i theta} on the A forward bond
        bonds = [(n, n + 1) for n in range(N - 1)]
        if spec.boundary is Boundary.PERIODIC:
            bonds.append((N - 1, 0))
        for n in range(N):
            add(2 * n, 2 * n + 1, -m)
        for n, n1 in bonds:
            add(2 * n, 2 * n1 + 1, -k)       # A_n - B_{n+1}
            add(2 * n + 1, 2 * n1, -k)       # B_n - A_{n+1}
            add(2 * n, 2 * n1, -k * ph)      # A_n - A_{n+1}
            add(2 * n + 1, 2 * n1 + 1, -k * np.conj(ph))  # B_n - B_{n+1}

    h = sp.csr_matrix(
        (np.asarray(vals, dtype=np.complex128), (rows, cols)), shape=(S, S)
    )
    h.sum_duplicates()
    return h


def build_hamiltonian(spec: ChainSpec, couplings: CouplingSet) -> sp.csr_matrix:
    """Sparse Hamiltonian in the interleaved site basis (treat as read-only)."""
    _check_coupling_model(spec, couplings)
    return _hamiltonian(spec, couplings)


def apply_hamiltonian(spec: ChainSpec, couplings: CouplingSet, psi: np.ndarray) -> np.ndarray:
    """H @ psi via the cached sparse matrix (bit-identical to build_hamiltonian)."""
    psi = np.asarray(psi)
    if psi.shape != (spec.sites,):
        raise ValueError(f"psi has length {psi.shape}, chain has {spec.sites} sites")
    return build_hamiltonian(spec, couplings) @ psi


def initial_state(
    spec: ChainSpec, kind: InitialStateKind, cell: int | None = None
) -> StateVector:
    """Normalized localized eigenstate of the protocol's starting Hamiltonian.

    SSH_LEFT_EDGE: |1,A>.
    SSH_BULK(n): (|n,B> + |n+1,A>)/sqrt(2), an E=+1 eigenstate at (J1,J2)=(0,1).
    CREUTZ_PLAQUETTE(n): (-i|n,A> + |n,B> + |n+1,A> - i|n+1,B>)/2, E = -2K.
    CREUTZ_LEFT_EDGE: (|1,A> - i|1,B>)/sqrt(2), E = 0.
    """
    N = spec.unit_cells
    amps = np.zeros(spec.sites, dtype=np.complex128)
    ssh_like = spec.model in (Model.SSH, Model.NH_SSH)
    if kind is InitialStateKind.SSH_LEFT_EDGE:
        if not ssh_like:
            raise ValueError("SSH_LEFT_EDGE requires an SSH-family chain")
        amps[0] = 1.0
    elif kind is InitialStateKind.SSH_BULK:
        if not ssh_like:
            raise ValueError("SSH_BULK requires an SSH-family chain")
        n = _bulk_cell(cell, N)
        amps[2 * n - 1] = 1 / np.sqrt(2)  # (n, B)
        amps[2 * n] = 1 / np.sqrt(2)      # (n+1, A)
    elif kind is InitialStateKind.CREUTZ_PLAQUETTE:
        if spec.model is not Model.CREUTZ:
            raise ValueError("CREUTZ_PLAQUETTE requires a Creutz chain")
        n = _bulk_cell(cell, N)
        amps[2 * n - 2] = -0.5j  # (n, A)
        amps[2 * n - 1] = 0.5    # (n, B)
        amps[2 * n] = 0.5        # (n+1, A)
        amps[2 * n + 1] = -0.5j  # (n+1, B)
    elif kind is InitialStateKind.CREUTZ_LEFT_EDGE:
        if spec.model is not Model.CREUTZ:
            raise ValueError("CREUTZ_LEFT_EDGE requires a Creutz chain")
        amps[0] = 1 / np.sqrt(2)
        amps[1] = -1j / np.sqrt(2)
    else:
        raise ValueError(f"unknown initial state kind {kind}")
    return StateVector(amplitudes=amps, log_scale=0.0, time=0.0)


def _bulk_cell(cell: int | None, N: int) -> int:
    if cell is None:
        raise ValueError("bulk initial states need a cell index")
    if not 2 <= cell <= N - 2:
        raise ValueError(f"bulk cell must satisfy 2 <= n <= N-2, got {cell}")
    return cell


def chiral_operator(spec: ChainSpec) -> np.ndarray:
    """Diagonal of Gamma = +1 on A sites, -1 on B sites."""
    d = np.ones(spec.sites)
    d[1::2] = -1.0
    return d
