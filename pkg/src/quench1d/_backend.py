"""Kernel backend selection: compiled extension if present, numpy otherwise.

Set QUENCH1D_DISABLE_EXT=1 to force the pure-numpy kernels.
"""
from __future__ import annotations

import os

if os.environ.get("QUENCH1D_DISABLE_EXT"):
    from . import _kernels_np as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_np as _impl

        BACKEND = "numpy"

rk4_ssh = _impl.rk4_ssh
rk4_creutz = _impl.rk4_creutz


def backend_name() -> str:
    """Which propagation backend was selected at import time."""
    return BACKEND
