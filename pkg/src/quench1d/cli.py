"""Command-line front end: run quenches, sweeps, spectra, and the
extended-mode analyses, emitting plot-ready CSV/JSON.

Configuration comes from an optional YAML file plus flag overrides (flags
win). Output files are deterministic: rerunning the same config yields
byte-identical bytes, and every file carries the package version and a hash
of the resolved configuration. Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .analysis import (
    default_fit_window,
    fit_ansatz,
    fit_power_law,
    mode_distance,
    normalized_l1,
    reconstruct_profile,
    fidelity_formula,
    sweep,
)
from .evolve import IntegratorConfig, evolve
from .models import Boundary, ChainSpec, InitialStateKind, Model, initial_state
from .observables import (
    adiabatic_fidelity,
    cell_occupancy,
    dimer_profile,
    has_dimer_profile,
    return_probability,
    transport_summary,
)
from .protocols import QuenchProtocol, t_end
from .spectrum import instantaneous_spectrum, odd_chain_spectrum, project_extended

_OUT_ENV = "QUENCH1D_OUTDIR"


class ConfigError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters; every field has a flag and a YAML key."""

    model: str = "ssh"
    boundary: str = "open_even"
    cells: int = 100
    protocol: str = "linear"
    beta: float | None = None
    beta_list: tuple[float, ...] | None = None
    initial: str = "ssh_left_edge"
    cell: int | None = None
    gamma: float = 0.0
    dt: float | None = None
    snapshot_times: tuple[float, ...] = ()
    out: str | None = None
    workers: int = 0  # 0 -> use available parallelism
    fit_window: tuple[float, float] | None = None
    width: float = 40.0
    samples: int = 101
    fidelity_cells: int = 100

    def chain_spec(self) -> ChainSpec:
        try:
            model = Model(self.model)
            boundary = Boundary(self.boundary)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        try:
            return ChainSpec(model, self.cells, boundary, gamma=self.gamma)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def quench_protocol(self) -> QuenchProtocol:
        try:
            return QuenchProtocol(self.protocol)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def initial_kind(self) -> InitialStateKind:
        try:
            return InitialStateKind(self.initial)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def single_beta(self) -> float:
        if self.beta is None:
            raise ConfigError("this command needs a single --beta")
        return self.beta

    def betas(self) -> tuple[float, ...]:
        if self.beta_list:
            return self.beta_list
        if self.beta is not None:
            return (self.beta,)
        raise ConfigError("this command needs --beta-list (or --beta)")

    def n_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get(_OUT_ENV) or "out")

    def hash(self) -> str:
        payload = json.dumps(dataclasses.asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """YAML file merged with flag overrides (overrides win)."""
    data: dict = {}
    if path is not None:
        with open(path) as fh:
            loaded = yaml.safe_load(fh)
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"config file {path} must be a mapping")
        unknown = set(loaded) - _CONFIG_FIELDS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data.update(loaded)
    data.update({k: v for k, v in overrides.items() if v is not None})
    for key in ("beta_list", "snapshot_times"):
        if key in data and data[key] is not None:
            data[key] = tuple(float(x) for x in data[key])
    if data.get("fit_window") is not None:
        lo, hi = data["fit_window"]
        data["fit_window"] = (float(lo), float(hi))
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# --- deterministic writers -------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _write_csv(path: Path, cfg: RunConfig, schema: str, columns, rows) -> None:
    lines = [
        f"# version: {__version__}",
        f"# config: {cfg.hash()}",
        f"# schema: {schema} v1",
        ",".join(columns),
    ]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, cfg: RunConfig, payload: dict) -> None:
    body = {"version": __version__, "config": cfg.hash(), **payload}
    path.write_text(json.dumps(_de_nan(body), indent=2, sort_keys=True) + "\n")


def _de_nan(obj):
    if isinstance(obj, dict):
        return {k: _de_nan(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_de_nan(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and math.isnan(obj):
        return None
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _run_meta(cfg: RunConfig) -> dict:
    return {
        "model": cfg.model,
        "boundary": cfg.boundary,
        "cells": cfg.cells,
        "gamma": cfg.gamma,
        "protocol": cfg.protocol,
        "initial": cfg.initial,
        "cell": cfg.cell,
    }


# --- commands ---------------------------------------------------------------


def cmd_evolve(cfg: RunConfig) -> int:
    spec = cfg.chain_spec()
    protocol = cfg.quench_protocol()
    beta = cfg.single_beta()
    state = initial_state(spec, cfg.initial_kind(), cfg.cell)
    icfg = IntegratorConfig(dt=cfg.dt, snapshot_times=cfg.snapshot_times)
    res = evolve(spec, protocol, beta, state, icfg)

    summary = dict(_run_meta(cfg))
    summary.update(
        beta=beta,
        t_end=t_end(protocol, beta),
        dt=res.dt,
        log_scale=res.final.log_scale,
        return_prob=return_probability(res.final),
    )
    if has_dimer_profile(protocol):
        prof = dimer_profile(res.final, spec, protocol, beta=beta, offset=cfg.cell or 0)
        ts = transport_summary(prof)
        columns = ("n", "p_plus", "p_minus")
        rows = [
            (n + 1, prof.p_plus[n], prof.p_minus[n]) for n in range(prof.cells)
        ]
        schema = "profile"
        summary.update(
            distance=ts.distance,
            width=ts.width,
            peak=ts.peak,
            peak_cell=ts.peak_cell,
            rescale_log=prof.rescale_log,
        )
    else:
        occ = cell_occupancy(res.final, spec)
        columns = ("n", "p_cell")
        rows = [(n + 1, occ[n]) for n in range(len(occ))]
        schema = "occupancy"
    if spec.model is Model.SSH and spec.boundary is Boundary.OPEN_ODD:
        summary["fidelity"] = adiabatic_fidelity(res.final, spec)

    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "profile.csv", cfg, schema, columns, rows)
    _write_json(out / "summary.json", cfg, summary)
    if res.snapshots:
        snap_rows = []
        for snap in res.snapshots:
            occ = cell_occupancy(snap, spec)
            snap_rows.extend((snap.time, n + 1, occ[n]) for n in range(len(occ)))
        _write_csv(out / "snapshots.csv", cfg, "snapshots", ("t", "n", "p_cell"), snap_rows)
    print(f"wrote {out / 'profile.csv'} and {out / 'summary.json'}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    spec = cfg.chain_spec()
    protocol = cfg.quench_protocol()
    betas = cfg.betas()
    result = sweep(
        spec,
        protocol,
        betas,
        cfg.initial_kind(),
        cell=cfg.cell,
        dt=cfg.dt,
        workers=cfg.n_workers(),
    )
    columns = ("beta", "distance", "width", "peak", "return_prob", "fidelity")
    rows = [
        (r.beta, r.distance, r.width, r.peak, r.return_prob, r.fidelity)
        for r in result.rows
    ]

    fits: dict[str, dict | None] = {}
    window = None
    if len(betas) < 2:
        print("single beta: scaling fits skipped", file=sys.stderr)
    else:
        if cfg.fit_window is not None:
            window = cfg.fit_window
        else:
            try:
                window = default_fit_window(betas)
            except ValueError:
                window = (min(betas), max(betas))
        b = np.array([r.beta for r in result.rows])
        for name in ("distance", "width", "peak"):
            y = np.array([getattr(r, name) for r in result.rows])
            ok = np.isfinite(y) & (y > 0)
            fit = None
            if ok.sum() >= 4:
                try:
                    f = fit_power_law(b[ok], y[ok], window)
                    fit = {
                        "exponent": f.exponent,
                        "sign": f.sign,
                        "prefactor": f.prefactor,
                        "window": list(f.window),
                        "r_squared": f.r_squared,
                    }
                except ValueError as exc:
                    print(f"{name}: fit skipped ({exc})", file=sys.stderr)
            fits[name] = fit

    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "sweep.csv", cfg, "sweep", columns, rows)
    payload = dict(_run_meta(cfg))
    payload.update(
        dt=cfg.dt if cfg.dt is not None else "auto",
        backend=result.meta["backend"],
        fit_window=list(window) if window else None,
        fits=fits,
    )
    _write_json(out / "fits.json", cfg, payload)
    print(f"wrote {out / 'sweep.csv'} and {out / 'fits.json'}")
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    spec = cfg.chain_spec()
    protocol = cfg.quench_protocol()
    beta = cfg.single_beta()
    if cfg.samples < 2:
        raise ConfigError("--samples must be >= 2")
    times = np.linspace(0.0, t_end(protocol, beta), cfg.samples)
    rows = []
    for t in times:
        ev = np.asarray(instantaneous_spectrum(spec, protocol, beta, float(t)))
        rows.extend(
            (t, i, float(np.real(e)), float(np.imag(e))) for i, e in enumerate(ev)
        )
    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "spectrum.csv", cfg, "spectrum", ("t", "index", "re_e", "im_e"), rows)
    print(f"wrote {out / 'spectrum.csv'}")
    return 0


def cmd_appendix(cfg: RunConfig) -> int:
    if (cfg.model, cfg.boundary, cfg.protocol) != ("ssh", "open_odd", "linear"):
        raise ConfigError(
            "mode analysis needs model=ssh, boundary=open_odd, protocol=linear"
        )
    spec = cfg.chain_spec()
    beta = cfg.single_beta()
    N = cfg.cells
    state = initial_state(spec, InitialStateKind.SSH_LEFT_EDGE)
    res = evolve(spec, QuenchProtocol.LINEAR, beta, state, IntegratorConfig(dt=cfg.dt))

    table = odd_chain_spectrum(1.0, 0.0, N)
    probs = project_extended(res.final, 1.0, 0.0, N)
    mode_rows = [
        (j, table.k[j - 1], table.energy[j - 1], table.gap[j - 1], probs[j - 1])
        for j in range(1, 2 * N)
    ]

    extended = np.arange(1, 2 * N) != N
    ans = fit_ansatz(table.gap[extended], probs[extended], beta)

    upper = np.arange(1, 2 * N) > N
    dists = np.array([mode_distance(k, beta) for k in table.k[upper]])
    rec = reconstruct_profile(probs[upper], dists, cfg.width, N)
    exact = dimer_profile(res.final, spec, QuenchProtocol.LINEAR)
    l1 = normalized_l1(rec.p_plus, exact.p_plus)
    rec_rows = [(n + 1, exact.p_plus[n], rec.p_plus[n]) for n in range(N)]

    if cfg.beta_list:
        fid_betas = np.asarray(cfg.beta_list, float)
    else:
        fid_betas = np.logspace(math.log10(2e-5), math.log10(1e-3), 20)
    fid_spec = ChainSpec(Model.SSH, cfg.fidelity_cells, Boundary.OPEN_ODD)
    fid_state = initial_state(fid_spec, InitialStateKind.SSH_LEFT_EDGE)
    fid_rows = []
    for fb in fid_betas:
        fr = evolve(
            fid_spec, QuenchProtocol.LINEAR, float(fb), fid_state, IntegratorConfig(dt=cfg.dt)
        )
        fid_rows.append(
            (
                float(fb),
                adiabatic_fidelity(fr.final, fid_spec),
                fidelity_formula(cfg.fidelity_cells, float(fb)),
            )
        )

    out = cfg.out_dir()
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "modes.csv", cfg, "modes", ("j", "k", "energy", "gap", "p"), mode_rows)
    _write_json(
        out / "ansatz.json",
        cfg,
        {
            "beta": beta,
            "cells": N,
            "c1": ans.c1,
            "c2": ans.c2,
            "c3": ans.c3,
            "peak_location": ans.peak_location,
            "reconstruction_width": cfg.width,
            "reconstruction_l1": l1,
        },
    )
    _write_csv(
        out / "reconstruction.csv", cfg, "reconstruction", ("n", "p_exact", "p_rect"), rec_rows
    )
    _write_csv(
        out / "fidelity.csv",
        cfg,
        "fidelity",
        ("beta", "f_numeric", "f_formula"),
        fid_rows,
    )
    print(f"wrote {out / 'modes.csv'}, {out / 'ansatz.json'}, "
          f"{out / 'reconstruction.csv'}, {out / 'fidelity.csv'}")
    return 0


# --- argument parsing --------------------------------------------------------


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list {text!r}") from exc


def _window(text: str) -> tuple[float, float]:
    parts = _float_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("fit window must be 'lo,hi'")
    return parts


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML config file; flags override it")
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--boundary", choices=[b.value for b in Boundary])
    p.add_argument("--cells", type=int, help="number of unit cells N")
    p.add_argument("--protocol", choices=[q.value for q in QuenchProtocol])
    p.add_argument("--beta", type=float, help="quench rate")
    p.add_argument("--beta-list", dest="beta_list", type=_float_list,
                   help="comma-separated quench rates")
    p.add_argument("--initial", choices=[k.value for k in InitialStateKind])
    p.add_argument("--cell", type=int, help="cell index for bulk initial states")
    p.add_argument("--gamma", type=float, help="gain/loss rate (lossy chain only)")
    p.add_argument("--dt", type=float, help="integrator step (default: auto)")
    p.add_argument("--out", help=f"output directory (or ${_OUT_ENV})")
    p.add_argument("--workers", type=int, help="parallel runs (default: all cores)")
    p.add_argument("--fit-window", dest="fit_window", type=_window,
                   help="beta window 'lo,hi' for power-law fits")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quench1d",
        description="Quench dynamics and scaling analysis on 1D two-band chains",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ev = sub.add_parser("evolve", help="single run: profile + summary")
    _add_common(p_ev)
    p_ev.add_argument("--snapshots", dest="snapshot_times", type=_float_list,
                      help="comma-separated times to record")

    p_sw = sub.add_parser("sweep", help="beta sweep: table + power-law fits")
    _add_common(p_sw)

    p_sp = sub.add_parser("spectrum", help="instantaneous spectra along the drive")
    _add_common(p_sp)
    p_sp.add_argument("--samples", type=int, help="number of time samples")

    p_ap = sub.add_parser("appendix", help="extended-mode fit, reconstruction, fidelity")
    _add_common(p_ap)
    p_ap.add_argument("--width", type=float, help="rectangle width for reconstruction")
    p_ap.add_argument("--fidelity-cells", dest="fidelity_cells", type=int,
                      help="chain size for the fidelity curve")

    return parser


_COMMANDS = {
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "appendix": cmd_appendix,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        k: v for k, v in vars(args).items() if k in _CONFIG_FIELDS
    }
    try:
        cfg = load_config(args.config, overrides)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FloatingPointError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
