"""State container shared by the model and propagation layers."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class StateVector:
    """Complex site amplitudes plus log-domain norm bookkeeping.

    The physical state is ``exp(log_scale) * amplitudes``; the stored
    amplitudes are kept near unit norm so that non-Hermitian growth of
    order exp(gamma/beta) never overflows a double.
    """

    amplitudes: np.ndarray
    log_scale: float = 0.0
    time: float = 0.0

    def __post_init__(self) -> None:
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must be a non-empty 1D vector")

    @property
    def sites(self) -> int:
        return self.amplitudes.size

    def stored_norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def log_norm(self) -> float:
        """log of the physical norm, safe at any growth factor."""
        return self.log_scale + float(np.log(self.stored_norm()))

    def with_time(self, time: float) -> "StateVector":
        return replace(self, time=time)
