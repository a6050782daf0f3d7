"""Shared fixtures: the expensive reference runs reused by several
acceptance tests are computed once per session."""
from __future__ import annotations

import time

import numpy as np
import pytest

from quench1d import (
    Boundary,
    ChainSpec,
    InitialStateKind,
    Model,
    QuenchProtocol,
    evolve,
    initial_state,
    normalized_l1,
    odd_chain_spectrum,
    project_extended,
    sweep,
)


def interp_l1(xa, ya, xb, yb, points: int = 512) -> float:
    """Normalized L1 distance between two curves on different grids."""
    lo = max(np.min(xa), np.min(xb))
    hi = min(np.max(xa), np.max(xb))
    grid = np.linspace(lo, hi, points)
    return normalized_l1(np.interp(grid, xa, ya), np.interp(grid, xb, yb))


@pytest.fixture(scope="session")
def edge_sweep():
    """N=600 edge-start linear sweep, 12 rates over two decades; timed."""
    spec = ChainSpec(Model.SSH, 600, Boundary.OPEN_EVEN)
    betas = np.logspace(-4, -2, 12)
    t0 = time.perf_counter()
    result = sweep(spec, QuenchProtocol.LINEAR, betas, InitialStateKind.SSH_LEFT_EDGE)
    seconds = time.perf_counter() - t0
    return {"betas": betas, "rows": result.rows, "seconds": seconds}


@pytest.fixture(scope="session")
def mode_decomposition():
    """Edge quench on the 1999-site chain decomposed over the analytic
    eigenbasis of the final couplings; shared by the transition-probability
    fit and the wave-package reconstruction tests."""
    cells = 1000
    beta = 5e-4
    spec = ChainSpec(Model.SSH, cells, Boundary.OPEN_ODD)
    state = initial_state(spec, InitialStateKind.SSH_LEFT_EDGE)
    result = evolve(spec, QuenchProtocol.LINEAR, beta, state)
    table = odd_chain_spectrum(1.0, 0.0, cells)
    probs = project_extended(result.final, 1.0, 0.0, cells)
    return {
        "spec": spec,
        "beta": beta,
        "cells": cells,
        "final": result.final,
        "table": table,
        "probs": probs,
    }
