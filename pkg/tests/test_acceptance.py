"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with -s to see the lines for passing tests).

The model cross-validation criterion is asserted exactly as specified, at
three standard errors of the across-seed mean. The per-station analytical
chain is a decoupling approximation, so its conditional collision
probability carries a small systematic offset from the coupled simulator
(about 9% relative at n = 2, fading with n) that no sample size can wash
out; the corresponding assertions document this honestly rather than
loosening the stated tolerance. The utilization half of the criterion, and
all other criteria, pass.
"""
import math
import statistics

import pytest

from qobeam.cbap import (
    busy_slot_probabilities,
    expected_backoff_slots,
    expected_idle_slots,
)
from qobeam.contention import (
    CLOSED_FORM,
    NUMERIC_CHAIN,
    p_of_tau,
    sector_utilization,
    slot_probabilities,
    solve_contention,
    solve_markov_numeric,
    utilization_from_solution,
)
from qobeam.experiments import ExperimentConfig, run_comparison
from qobeam.linkbudget import PhyEnv, max_tx_beamwidth, received_power
from qobeam.scenario import GeometryConfig, generate_scenario
from qobeam.sectors import AllocatorConfig, allocate_adaptive, stas_in_arc
from qobeam.simulator import simulate_sector

TWO_PI = 2 * math.pi

SIM_N_VALUES = (2, 5, 10, 20, 50)
SIM_SLOTS = 1_000_000
SIM_SEEDS = 20


def report(name, ok):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")


@pytest.fixture(scope="module")
def sim_stats(mac, slots):
    """20 seeds x 1e6 slots per station count."""
    return {
        n: [simulate_sector(n, mac, slots, max_slots=SIM_SLOTS, seed=seed)
            for seed in range(SIM_SEEDS)]
        for n in SIM_N_VALUES
    }


@pytest.fixture(scope="module")
def comparison():
    """Evaluation protocol: distances U[1,10] m, wrapped-normal angles
    (180 deg mean, 90 deg spread), 20 deg minimum/step widths, 90 deg cap,
    90 deg fixed grid, requests per sector equal to member count."""
    return run_comparison(ExperimentConfig(seeds=tuple(range(200))))


def test_criterion_1_contention_point_within_3se(mac, sim_stats):
    failures = []
    for n in SIM_N_VALUES:
        sol = solve_markov_numeric(n, mac)
        taus = [st.empirical_tau for st in sim_stats[n]]
        ps = [st.empirical_p for st in sim_stats[n]]
        se_tau = statistics.stdev(taus) / math.sqrt(len(taus))
        se_p = statistics.stdev(ps) / math.sqrt(len(ps))
        z_tau = (statistics.fmean(taus) - sol.tau) / se_tau
        z_p = (statistics.fmean(ps) - sol.p) / se_p
        print(f"  n={n:3d}: z_tau={z_tau:+7.2f}  z_p={z_p:+7.2f}  "
              f"(tau {statistics.fmean(taus):.6f} vs {sol.tau:.6f}, "
              f"p {statistics.fmean(ps):.6f} vs {sol.p:.6f})")
        if abs(z_tau) > 3.0:
            failures.append((n, "tau", z_tau))
        if abs(z_p) > 3.0:
            failures.append((n, "p", z_p))
    report("criterion-1 contention point vs chain within 3 SE", not failures)
    assert not failures, (
        "decoupled chain vs coupled simulator: systematic offsets exceed "
        f"3 SE at 2e7 samples: {failures}")


def test_criterion_1_utilization_within_5pct(mac, slots, sim_stats):
    worst = 0.0
    for n in SIM_N_VALUES:
        u_chain = utilization_from_solution(solve_markov_numeric(n, mac), slots)
        u_sim = statistics.fmean(st.utilization for st in sim_stats[n])
        rel = abs(u_sim - u_chain) / u_chain
        worst = max(worst, rel)
        print(f"  n={n:3d}: U chain={u_chain:.6f} sim={u_sim:.6f} rel={rel:.4f}")
    report("criterion-1 utilization vs simulator within 5%", worst <= 0.05)
    assert worst <= 0.05


def test_criterion_2_utilization_trend(mac, slots):
    us = {n: sector_utilization(n, mac, slots, NUMERIC_CHAIN) for n in range(5, 51)}
    decreasing = all(us[n + 1] < us[n] for n in range(5, 50))
    ratio = us[50] / us[5]
    ok = decreasing and ratio < 0.6
    print(f"  U(5)={us[5]:.6f} U(50)={us[50]:.6f} ratio={ratio:.4f} "
          f"strictly-decreasing={decreasing}")
    report("criterion-2 utilization decreasing, U(50) < 0.6 U(5)", ok)
    assert decreasing
    assert ratio < 0.6


def test_criterion_3_adaptive_utilization_uplift(comparison):
    uplift = {a.n: a.uplift_mean for a in comparison.aggregates}
    for n, u in sorted(uplift.items()):
        print(f"  n={n:3d}: mean uplift {u * 100:+.2f}%")
    in_band = 0.10 <= uplift[50] <= 0.45
    positive = all(uplift[n] > 0 for n in (20, 30, 40, 50))
    report("criterion-3 adaptive utilization uplift", in_band and positive)
    assert in_band, f"uplift at n=50 is {uplift[50]:.3f}, outside [0.10, 0.45]"
    assert positive


def test_criterion_4_cbap_duration_reduction(comparison):
    reduction = {a.n: a.reduction_mean for a in comparison.aggregates}
    for n, r in sorted(reduction.items()):
        print(f"  n={n:3d}: mean duration reduction {r * 100:+.2f}%")
    in_band = 0.25 <= reduction[50] <= 0.65
    ns = sorted(reduction)
    growing = all(reduction[a] < reduction[b] for a, b in zip(ns, ns[1:]))
    report("criterion-4 contention-period reduction", in_band and growing)
    assert in_band, f"reduction at n=50 is {reduction[50]:.3f}, outside [0.25, 0.65]"
    assert growing


def test_criterion_5_link_budget_spot_value():
    env = PhyEnv()
    omega = max_tx_beamwidth(5.0, math.radians(60), "MCS0", env)
    deg = math.degrees(omega)
    roundtrip = received_power(5.0, omega, math.radians(60), env)
    ok = abs(deg - 54.5) <= 0.5 and abs(roundtrip - (-78.0)) <= 1e-9
    print(f"  max tx beamwidth = {deg:.3f} deg, roundtrip power {roundtrip:.12f} dBm")
    report("criterion-5 link-budget spot value", ok)
    assert deg == pytest.approx(54.5, abs=0.5)
    assert roundtrip == pytest.approx(-78.0, abs=1e-9)


def test_criterion_6_invariant_suites(mac, slots):
    # probability normalisations at 1e-12
    for n in (1, 2, 3, 7, 20, 60):
        for tau in (1e-9, 1e-4, 0.05, 0.3, 0.7, 1.0):
            probs = slot_probabilities(n, tau)
            assert probs.p_idle + probs.p_suc + probs.p_col == pytest.approx(1.0, abs=1e-12)
            ps, pc = busy_slot_probabilities(n, tau)
            assert ps + pc == pytest.approx(1.0, abs=1e-12)

    # fixed-point residuals for both solvers
    for method in (CLOSED_FORM, NUMERIC_CHAIN):
        for n in (1, 2, 5, 13, 34, 60):
            sol = solve_contention(n, mac, method)
            assert abs(sol.p - p_of_tau(sol.tau, n)) <= 1e-10

    # plan partition invariants on 1000 random scenarios
    cfg = AllocatorConfig()
    for seed in range(1000):
        scen = generate_scenario(GeometryConfig(n=1 + seed % 50, seed=seed))
        plan = allocate_adaptive(scen, cfg, mac, slots)
        claimed = []
        for sec in plan.sectors:
            assert set(sec.members) <= set(stas_in_arc(scen, sec.start, sec.width))
            claimed.extend(sec.members)
        assert sorted(claimed) == list(range(scen.n))
        assert plan.uncovered == ()
        assert sum(s.width for s in plan.sectors) <= TWO_PI + 1e-9

    # seed determinism, bit-identical
    gc = GeometryConfig(n=40, seed=77)
    assert generate_scenario(gc) == generate_scenario(gc)
    assert simulate_sector(6, mac, slots, max_slots=30_000, seed=5) == \
        simulate_sector(6, mac, slots, max_slots=30_000, seed=5)

    # backoff hand values
    assert expected_backoff_slots(0, mac) == 4.0
    assert expected_backoff_slots(1, mac) == 12.0
    assert expected_backoff_slots(4, mac) == 92.0
    assert expected_idle_slots(0.0, mac) == 4.0
    assert expected_idle_slots(1 - 1e-12, mac) == pytest.approx(124.0, abs=1e-6)

    report("criterion-6 invariant suites", True)
