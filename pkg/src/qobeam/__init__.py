"""Contention analysis, adaptive quasi-omni beamwidth selection and
contention-period budgeting for 60 GHz WLANs, with a slot-level Monte Carlo
simulator as the empirical cross-check."""

from .params import (
    MacParams,
    Scenario,
    SlotDurations,
    Station,
    TimingParams,
    frame_duration,
    slot_durations,
)
from .contention import (
    CLOSED_FORM,
    NUMERIC_CHAIN,
    ContentionSolution,
    SlotProbabilities,
    network_utilization,
    p_of_tau,
    sector_utilization,
    slot_probabilities,
    solve_contention,
    solve_fixed_point,
    solve_markov_numeric,
    tau_of_p,
)
from .linkbudget import (
    PhyEnv,
    directivity_gain,
    max_tx_beamwidth,
    received_power,
    required_tx_beamwidth_curve,
)
from .sectors import (
    AllocatorConfig,
    SectorPlan,
    SectorSpec,
    allocate_adaptive,
    allocate_fixed,
    stas_in_arc,
)
from .cbap import (
    CbapEstimate,
    busy_slot_probabilities,
    expected_backoff_slots,
    expected_idle_slots,
    min_busy_slots,
    min_cbap_duration,
)
from .scenario import GeometryConfig, generate_scenario, load_scenario, save_scenario
from .simulator import SimStats, simulate_plan, simulate_sector
from .experiments import (
    ExperimentConfig,
    run_comparison,
    run_linkbudget_curves,
    run_utilization_sweep,
    run_validation,
)

__version__ = "0.1.0"

__all__ = [
    "MacParams", "TimingParams", "SlotDurations", "Station", "Scenario",
    "frame_duration", "slot_durations",
    "ContentionSolution", "SlotProbabilities", "CLOSED_FORM", "NUMERIC_CHAIN",
    "p_of_tau", "tau_of_p", "solve_fixed_point", "solve_markov_numeric",
    "solve_contention", "slot_probabilities", "sector_utilization",
    "network_utilization",
    "PhyEnv", "directivity_gain", "received_power", "max_tx_beamwidth",
    "required_tx_beamwidth_curve",
    "AllocatorConfig", "SectorSpec", "SectorPlan", "stas_in_arc",
    "allocate_adaptive", "allocate_fixed",
    "CbapEstimate", "expected_backoff_slots", "expected_idle_slots",
    "busy_slot_probabilities", "min_busy_slots", "min_cbap_duration",
    "GeometryConfig", "generate_scenario", "save_scenario", "load_scenario",
    "SimStats", "simulate_sector", "simulate_plan",
    "ExperimentConfig", "run_utilization_sweep", "run_comparison",
    "run_linkbudget_curves", "run_validation",
]
