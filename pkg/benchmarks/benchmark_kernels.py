"""Time the compiled RK4 kernels against the pure-numpy fallback.

Run from the repo root:

    python3 benchmarks/benchmark_kernels.py [--cells 600] [--steps 20000]

Both backends integrate the same linear edge quench; the script reports
wall time per backend, the speedup, and the max amplitude deviation
(which should sit at machine precision).
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from quench1d import _kernels_np
from quench1d._backend import BACKEND, rk4_creutz, rk4_ssh


def _ssh_inputs(cells: int, steps: int):
    rng = np.random.default_rng(7)
    psi = rng.standard_normal(2 * cells) + 1j * rng.standard_normal(2 * cells)
    psi /= np.linalg.norm(psi)
    u = np.linspace(0.0, 1.0, 2 * steps + 1)
    return psi.astype(np.complex128), u, 1.0 - u


def _creutz_inputs(cells: int, steps: int):
    psi, m, k = _ssh_inputs(cells, steps)
    theta = np.full_like(m, -np.pi / 2)
    return psi, m, k, np.cos(theta), np.sin(theta)


def _time(fn, *args, repeats: int = 3) -> tuple[float, np.ndarray, float]:
    best = np.inf
    out = None
    logs = 0.0
    for _ in range(repeats):
        psi = args[0].copy()
        t0 = time.perf_counter()
        logs = fn(psi, *args[1:])
        best = min(best, time.perf_counter() - t0)
        out = psi
    return best, out, logs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, default=600)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if BACKEND != "cython":
        print("compiled extension not loaded; timing numpy against itself")

    dt = 0.01
    print(f"{args.cells} cells, {args.steps} RK4 steps, best of {args.repeats}")

    psi0, j1, j2 = _ssh_inputs(args.cells, args.steps)
    t_ext, psi_ext, ls_ext = _time(
        rk4_ssh, psi0, j1, j2, 0.0, dt, args.steps, False, False, repeats=args.repeats
    )
    t_np, psi_np, ls_np = _time(
        _kernels_np.rk4_ssh, psi0, j1, j2, 0.0, dt, args.steps, False, False,
        repeats=args.repeats,
    )
    dev = np.max(np.abs(psi_ext - psi_np)) + abs(ls_ext - ls_np)
    print(f"ssh    {BACKEND}: {t_ext:7.3f} s   numpy: {t_np:7.3f} s   "
          f"speedup {t_np / t_ext:4.2f}x   max dev {dev:.2e}")

    psi0, m, k, ct, st = _creutz_inputs(args.cells // 2, args.steps)
    t_ext, psi_ext, ls_ext = _time(
        rk4_creutz, psi0, m, k, ct, st, dt, args.steps, False, repeats=args.repeats
    )
    t_np, psi_np, ls_np = _time(
        _kernels_np.rk4_creutz, psi0, m, k, ct, st, dt, args.steps, False,
        repeats=args.repeats,
    )
    dev = np.max(np.abs(psi_ext - psi_np)) + abs(ls_ext - ls_np)
    print(f"creutz {BACKEND}: {t_ext:7.3f} s   numpy: {t_np:7.3f} s   "
          f"speedup {t_np / t_ext:4.2f}x   max dev {dev:.2e}")


if __name__ == "__main__":
    main()
