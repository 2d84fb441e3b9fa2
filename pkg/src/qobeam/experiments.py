"""Experiment drivers behind the CLI: sweeps, the adaptive-vs-fixed
comparison, link-budget curves and the three-way model validation."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace

from .cbap import min_cbap_duration
from .contention import (
    NUMERIC_CHAIN,
    sector_utilization,
    network_utilization,
    solve_fixed_point,
    solve_markov_numeric,
    utilization_from_solution,
)
from .linkbudget import PhyEnv, max_tx_beamwidth
from .params import MacParams, SlotDurations, TimingParams, slot_durations
from .scenario import GeometryConfig, generate_scenario
from .sectors import AllocatorConfig, SectorPlan, allocate_adaptive, allocate_fixed
from .simulator import simulate_sector

DEFAULT_N_SWEEP = (10, 20, 30, 40, 50)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a reproducible experiment run needs."""

    mac: MacParams = MacParams()
    timing: TimingParams = TimingParams()
    env: PhyEnv = PhyEnv()
    geometry: GeometryConfig = GeometryConfig()
    allocator: AllocatorConfig = AllocatorConfig()
    fixed_width: float = math.pi / 2   # rad
    seeds: tuple[int, ...] = tuple(range(200))
    method: str = NUMERIC_CHAIN
    n_sweep: tuple[int, ...] = DEFAULT_N_SWEEP

    @property
    def slots(self) -> SlotDurations:
        return slot_durations(self.timing)


def run_utilization_sweep(n_values, config: ExperimentConfig):
    """Analytic per-sector utilization for each station count.

    Returns (rows, errors): rows are (n, utilization), errors are
    (n, message) for counts whose solve failed; the sweep continues past
    failures.
    """
    rows, errors = [], []
    for n in n_values:
        try:
            rows.append((n, sector_utilization(n, config.mac, config.slots, config.method)))
        except Exception as exc:  # report and continue per row
            errors.append((n, str(exc)))
    return rows, errors


@dataclass(frozen=True)
class ComparisonRow:
    """One (n, seed) draw of the adaptive-vs-fixed comparison."""

    n: int
    seed: int
    u_adaptive: float
    u_fixed: float
    t_adaptive: float  # s
    t_fixed: float     # s

    @property
    def uplift(self) -> float:
        return self.u_adaptive / self.u_fixed - 1.0

    @property
    def reduction(self) -> float:
        return 1.0 - self.t_adaptive / self.t_fixed


@dataclass(frozen=True)
class ComparisonAggregate:
    n: int
    seeds_used: int
    u_adaptive_mean: float
    u_adaptive_std: float
    u_fixed_mean: float
    u_fixed_std: float
    t_adaptive_mean: float
    t_adaptive_std: float
    t_fixed_mean: float
    t_fixed_std: float
    uplift_mean: float
    reduction_mean: float


@dataclass(frozen=True)
class ComparisonResult:
    rows: tuple[ComparisonRow, ...]
    aggregates: tuple[ComparisonAggregate, ...]
    failures: tuple[tuple[int, int, str], ...]  # (n, seed, message)


def _plan_metrics(plan: SectorPlan, config: ExperimentConfig) -> tuple[float, float]:
    """(network utilization, summed minimum contention-period duration)."""
    utils = [
        sector_utilization(len(s.members), config.mac, config.slots, config.method)
        for s in plan.sectors
    ]
    u = network_utilization(utils)
    t = sum(
        min_cbap_duration(len(s.members), len(s.members), config.mac,
                          config.slots, config.method).t_cbap
        for s in plan.sectors
        if s.members
    )
    return u, t


def run_comparison(config: ExperimentConfig) -> ComparisonResult:
    """Adaptive vs fixed-width sector plans over seeded random layouts.

    For every (n, seed): draw a layout, build both plans, and record the
    network utilization and the summed per-sector minimum contention-period
    duration (requests per sector equal to its member count). Rows are
    ordered by (n, seed) regardless of execution order.
    """
    rows: list[ComparisonRow] = []
    failures: list[tuple[int, int, str]] = []
    for n in config.n_sweep:
        for seed in config.seeds:
            try:
                scen = generate_scenario(replace(config.geometry, n=n, seed=seed))
                adaptive = allocate_adaptive(scen, config.allocator, config.mac,
                                             config.slots, config.method)
                fixed = allocate_fixed(scen, config.fixed_width)
                u_a, t_a = _plan_metrics(adaptive, config)
                u_f, t_f = _plan_metrics(fixed, config)
                rows.append(ComparisonRow(n=n, seed=seed, u_adaptive=u_a, u_fixed=u_f,
                                          t_adaptive=t_a, t_fixed=t_f))
            except Exception as exc:
                failures.append((n, seed, str(exc)))
    rows.sort(key=lambda r: (r.n, r.seed))
    aggregates = []
    for n in config.n_sweep:
        batch = [r for r in rows if r.n == n]
        if not batch:
            continue
        def _ms(vals):
            return (statistics.fmean(vals),
                    statistics.stdev(vals) if len(vals) > 1 else 0.0)
        ua, ua_s = _ms([r.u_adaptive for r in batch])
        uf, uf_s = _ms([r.u_fixed for r in batch])
        ta, ta_s = _ms([r.t_adaptive for r in batch])
        tf, tf_s = _ms([r.t_fixed for r in batch])
        aggregates.append(ComparisonAggregate(
            n=n, seeds_used=len(batch),
            u_adaptive_mean=ua, u_adaptive_std=ua_s,
            u_fixed_mean=uf, u_fixed_std=uf_s,
            t_adaptive_mean=ta, t_adaptive_std=ta_s,
            t_fixed_mean=tf, t_fixed_std=tf_s,
            uplift_mean=statistics.fmean([r.uplift for r in batch]),
            reduction_mean=statistics.fmean([r.reduction for r in batch]),
        ))
    return ComparisonResult(rows=tuple(rows), aggregates=tuple(aggregates),
                            failures=tuple(failures))


def run_linkbudget_curves(config: ExperimentConfig, mcs_list, d_list, rx_bw_list):
    """Max transmit beamwidth per (mcs, d, rx_bw) grid point.

    Returns (rows, skipped): rows are (mcs, d, rx_bw, tx_bw-or-None,
    clamped); unknown MCS names are listed in skipped and the grid moves on.
    """
    rows, skipped = [], []
    for mcs in mcs_list:
        if mcs not in config.env.sensitivities:
            skipped.append(mcs)
            continue
        for d in d_list:
            for rx in rx_bw_list:
                tx = max_tx_beamwidth(d, rx, mcs, config.env)
                clamped = tx is not None and tx >= 2.0 * math.pi
                rows.append((mcs, d, rx, tx, clamped))
    return rows, skipped


@dataclass(frozen=True)
class ValidationRow:
    """(p, tau, U) under both analytic methods and the simulator, one n."""

    n: int
    p_closed: float
    tau_closed: float
    u_closed: float
    p_chain: float
    tau_chain: float
    u_chain: float
    p_sim_mean: float
    p_sim_se: float
    tau_sim_mean: float
    tau_sim_se: float
    u_sim_mean: float
    chain_ok: bool


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple[ValidationRow, ...]
    notes: tuple[str, ...]
    passed: bool


def run_validation(config: ExperimentConfig, n_values=(1, 2, 5, 10, 20, 50),
                   sim_slots: int = 200_000, sim_seeds: int = 10,
                   z_max: float = 3.0, u_rel_max: float = 0.05,
                   tau_rel_max: float = 0.02, p_rel_max: float = 0.12) -> ValidationReport:
    """Cross-check closed form, numeric chain and simulator.

    The pass/fail verdict binds the numeric chain against the simulator;
    closed-form deltas are informational because the two analytic methods
    intentionally differ (see the module note in :mod:`qobeam.contention`).
    p and tau pass within ``z_max`` standard errors or within their relative
    floors, whichever is looser: the chain is a per-station decoupling, so a
    small systematic gap versus the coupled simulator survives any sample
    size (on p it reaches ~9% at n = 2 and fades by n = 50).
    """
    rows = []
    passed = True
    for n in n_values:
        closed = solve_fixed_point(n, config.mac)
        chain = solve_markov_numeric(n, config.mac)
        u_closed = utilization_from_solution(closed, config.slots)
        u_chain = utilization_from_solution(chain, config.slots)
        ps, taus, us = [], [], []
        for seed in range(sim_seeds):
            st = simulate_sector(n, config.mac, config.slots,
                                 max_slots=sim_slots, seed=seed)
            ps.append(st.empirical_p)
            taus.append(st.empirical_tau)
            us.append(st.utilization)
        p_mean = statistics.fmean(ps)
        tau_mean = statistics.fmean(taus)
        u_mean = statistics.fmean(us)
        p_se = statistics.stdev(ps) / math.sqrt(len(ps)) if len(ps) > 1 else 0.0
        tau_se = statistics.stdev(taus) / math.sqrt(len(taus)) if len(taus) > 1 else 0.0
        ok = (
            abs(p_mean - chain.p) <= max(z_max * p_se, p_rel_max * max(chain.p, 1e-12))
            and abs(tau_mean - chain.tau) <= max(z_max * tau_se, tau_rel_max * chain.tau)
            and (u_chain == 0.0 or abs(u_mean - u_chain) / u_chain <= u_rel_max)
        )
        passed = passed and ok
        rows.append(ValidationRow(
            n=n, p_closed=closed.p, tau_closed=closed.tau, u_closed=u_closed,
            p_chain=chain.p, tau_chain=chain.tau, u_chain=u_chain,
            p_sim_mean=p_mean, p_sim_se=p_se,
            tau_sim_mean=tau_mean, tau_sim_se=tau_se,
            u_sim_mean=u_mean, chain_ok=ok,
        ))
    tau0_closed = solve_fixed_point(1, config.mac).tau
    tau0_chain = solve_markov_numeric(1, config.mac).tau
    notes = (
        "closed-form and numeric-chain methods diverge at p -> 0: "
        f"tau = {tau0_closed:.6f} vs {tau0_chain:.6f} for the configured backoff "
        "constants; closed-form deltas are informational only.",
        "the chain is a per-station decoupling: its p differs from the "
        "coupled simulator by a systematic margin at small n, largest at n = 2.",
    )
    return ValidationReport(rows=tuple(rows), notes=notes, passed=passed)
