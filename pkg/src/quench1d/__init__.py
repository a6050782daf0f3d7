"""Quench dynamics on 1D two-band chains: models, drives, RK4 evolution,
analytic spectra, transport observables, and scaling analysis."""
from __future__ import annotations

from ._backend import backend_name
from .analysis import (
    AnsatzFit,
    LzsBound,
    ScalingFit,
    SweepResult,
    SweepRow,
    d_edge_closed_form,
    d_edge_leading_order,
    default_fit_window,
    fidelity_formula,
    fit_ansatz,
    fit_power_law,
    lzs_mode_data,
    lzs_return_bound,
    mode_distance,
    normalized_l1,
    reconstruct_profile,
    sweep,
)
from .evolve import (
    EvolveResult,
    IntegratorConfig,
    convergence_check,
    default_dt,
    evolve,
    spectral_radius,
)
from .models import (
    Boundary,
    ChainSpec,
    CouplingSet,
    InitialStateKind,
    Model,
    SiteIndex,
    apply_hamiltonian,
    build_hamiltonian,
    chiral_operator,
    initial_state,
)
from .observables import (
    DimerProfile,
    TransportSummary,
    adiabatic_fidelity,
    cell_occupancy,
    collapse_rescale,
    dimer_profile,
    has_dimer_profile,
    return_probability,
    transport_summary,
)
from .protocols import (
    QuenchProtocol,
    protocol_model,
    schedule_arrays,
    schedule_at,
    t_end,
)
from .spectrum import (
    BlochBlock,
    ExtendedModeTable,
    bloch_block,
    group_velocity,
    instantaneous_spectrum,
    odd_chain_eigenstate,
    odd_chain_spectrum,
    project_extended,
    spectrum_trace,
)
from .state import StateVector

__version__ = "0.1.0"

__all__ = [
    "AnsatzFit",
    "BlochBlock",
    "Boundary",
    "ChainSpec",
    "CouplingSet",
    "DimerProfile",
    "EvolveResult",
    "ExtendedModeTable",
    "InitialStateKind",
    "IntegratorConfig",
    "LzsBound",
    "Model",
    "QuenchProtocol",
    "ScalingFit",
    "SiteIndex",
    "StateVector",
    "SweepResult",
    "SweepRow",
    "TransportSummary",
    "adiabatic_fidelity",
    "apply_hamiltonian",
    "backend_name",
    "bloch_block",
    "build_hamiltonian",
    "cell_occupancy",
    "chiral_operator",
    "collapse_rescale",
    "convergence_check",
    "d_edge_closed_form",
    "d_edge_leading_order",
    "default_dt",
    "default_fit_window",
    "dimer_profile",
    "evolve",
    "fidelity_formula",
    "fit_ansatz",
    "fit_power_law",
    "group_velocity",
    "has_dimer_profile",
    "initial_state",
    "instantaneous_spectrum",
    "lzs_mode_data",
    "lzs_return_bound",
    "mode_distance",
    "normalized_l1",
    "odd_chain_eigenstate",
    "odd_chain_spectrum",
    "project_extended",
    "protocol_model",
    "reconstruct_profile",
    "return_probability",
    "schedule_arrays",
    "schedule_at",
    "spectral_radius",
    "spectrum_trace",
    "sweep",
    "t_end",
    "transport_summary",
]
