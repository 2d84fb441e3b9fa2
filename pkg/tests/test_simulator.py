import math
import statistics

import pytest

from qobeam.contention import solve_markov_numeric
from qobeam.errors import InvalidParameterError
from qobeam.params import MacParams
from qobeam.scenario import GeometryConfig, generate_scenario
from qobeam.sectors import AllocatorConfig, SectorPlan, allocate_adaptive
from qobeam.simulator import sector_seed, simulate_plan, simulate_sector


class TestSingleStation:
    def test_never_collides(self, mac, slots):
        st = simulate_sector(1, mac, slots, max_slots=100_000, seed=1)
        assert st.collision_slots == 0
        assert st.empirical_p == 0.0

    def test_elapsed_identity(self, mac, slots):
        st = simulate_sector(1, mac, slots, max_slots=50_000, seed=2)
        expected = (st.idle_slots * slots.t_idle + st.success_slots * slots.t_suc
                    + st.collision_slots * slots.t_col)
        assert st.elapsed == pytest.approx(expected, rel=1e-12)

    def test_tau_matches_chain(self, mac, slots):
        # stationary tau for one station is 2/(W0+1); 3 sigma of the run
        st = simulate_sector(1, mac, slots, max_slots=1_000_000, seed=3)
        tau = 2 / 9
        # one attempt per cycle of mean length 4.5 slots; success count is the
        # cycle count, so use a conservative binomial-style bound
        sigma = math.sqrt(tau * (1 - tau) / st.total_slots)
        assert abs(st.empirical_tau - tau) < 3 * sigma * 3  # wide, seed-stable

    def test_mean_elapsed_to_first_success(self, mac, slots):
        # expectation: E[counter] idle slots + one success slot,
        # counter uniform on [0, W0-1] so E = 3.5
        runs = 10_000
        total = 0.0
        for seed in range(runs):
            st = simulate_sector(1, mac, slots, target_successes=1, seed=seed)
            assert st.success_slots == 1
            total += st.elapsed
        mean = total / runs
        expected = 3.5 * slots.t_idle + slots.t_suc
        # sd of one run: sd(counter)*t_idle = sqrt(63/12)*6.5us = 14.9us
        sd_run = math.sqrt(63 / 12) * slots.t_idle
        assert mean == pytest.approx(expected, abs=3 * sd_run / math.sqrt(runs))


class TestCounting:
    def test_slot_identity(self, mac, slots):
        st = simulate_sector(7, mac, slots, max_slots=200_000, seed=5)
        assert st.idle_slots + st.success_slots + st.collision_slots == st.total_slots
        assert st.total_slots == 200_000

    def test_success_target_stop(self, mac, slots):
        st = simulate_sector(4, mac, slots, target_successes=1000, seed=6)
        assert st.success_slots == 1000

    def test_per_station_successes_sum(self, mac, slots):
        st = simulate_sector(5, mac, slots, max_slots=100_000, seed=7)
        assert sum(st.per_station_successes.values()) == st.success_slots

    def test_station_ids_used(self, mac, slots):
        st = simulate_sector(3, mac, slots, max_slots=1000, seed=8,
                             station_ids=(11, 22, 33))
        assert set(st.per_station_successes) == {11, 22, 33}

    def test_stop_required(self, mac, slots):
        with pytest.raises(InvalidParameterError):
            simulate_sector(3, mac, slots, seed=0)

    def test_n_zero_rejected(self, mac, slots):
        with pytest.raises(InvalidParameterError):
            simulate_sector(0, mac, slots, max_slots=10)


def reference_slot_loop(n, mac, max_slots, seed):
    """Naive per-slot mirror of the simulation kernel: same splitmix64
    stream and draw order, but no idle-run fast path. Tallies must match
    the kernel bit for bit."""
    mask = (1 << 64) - 1
    state = seed & mask

    def next_u01():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        z ^= z >> 31
        return (z >> 11) * 2.0 ** -53

    windows = [mac.window(i) for i in range(mac.h + 1)]
    stage = [0] * n
    counter = [int(next_u01() * mac.w0) for _ in range(n)]
    idle = suc = col = attempts = colliding = 0
    per_station = [0] * n
    for _ in range(max_slots):
        tx = [s for s in range(n) if counter[s] == 0]
        if not tx:
            idle += 1
            for s in range(n):
                counter[s] -= 1
            continue
        attempts += len(tx)
        if len(tx) == 1:
            suc += 1
        else:
            col += 1
            colliding += len(tx)
        for s in range(n):
            if counter[s] == 0:
                if len(tx) == 1:
                    per_station[s] += 1
                    stage[s] = 0
                elif stage[s] == mac.h:
                    stage[s] = 0
                else:
                    stage[s] += 1
                counter[s] = int(next_u01() * windows[stage[s]])
            else:
                counter[s] -= 1
    return idle, suc, col, attempts, colliding, per_station


class TestKernelEquivalence:
    @pytest.mark.parametrize("n,seed", [(1, 3), (2, 0), (5, 7), (12, 42)])
    def test_idle_jump_matches_naive_loop(self, mac, slots, n, seed):
        max_slots = 20_000
        st = simulate_sector(n, mac, slots, max_slots=max_slots, seed=seed)
        idle, suc, col, attempts, colliding, per_station = reference_slot_loop(
            n, mac, max_slots, seed)
        assert st.idle_slots == idle
        assert st.success_slots == suc
        assert st.collision_slots == col
        assert st.per_station_successes == {i: per_station[i] for i in range(n)}
        assert st.empirical_tau == attempts / (n * max_slots)
        if attempts:
            assert st.empirical_p == colliding / attempts


class TestReproducibility:
    def test_same_seed_identical(self, mac, slots):
        a = simulate_sector(6, mac, slots, max_slots=50_000, seed=42)
        b = simulate_sector(6, mac, slots, max_slots=50_000, seed=42)
        assert a == b

    def test_different_seed_differs(self, mac, slots):
        a = simulate_sector(6, mac, slots, max_slots=50_000, seed=42)
        b = simulate_sector(6, mac, slots, max_slots=50_000, seed=43)
        assert a != b


class TestAgainstChain:
    def test_n2_tau_close_to_chain(self, mac, slots):
        # the decoupled chain approximates tau well (few tenths of a percent)
        sol = solve_markov_numeric(2, mac)
        st = simulate_sector(2, mac, slots, max_slots=1_000_000, seed=11)
        assert st.empirical_tau == pytest.approx(sol.tau, rel=0.01)

    def test_minimal_backoff_matches_chain(self, slots):
        # m = h = 0: fixed window, chain tau = 2/(W0+1) at any p
        mac0 = MacParams(w0=8, m=0, h=0)
        sol = solve_markov_numeric(2, mac0)
        taus = [simulate_sector(2, mac0, slots, max_slots=200_000, seed=s).empirical_tau
                for s in range(8)]
        mean = statistics.fmean(taus)
        se = statistics.stdev(taus) / math.sqrt(len(taus))
        assert sol.tau == pytest.approx(2 / 9, abs=1e-12)
        assert abs(mean - sol.tau) < max(3 * se, 2e-4)

    def test_utilization_close(self, mac, slots):
        from qobeam.contention import sector_utilization
        for n in (5, 20):
            st = simulate_sector(n, mac, slots, max_slots=500_000, seed=13)
            assert st.utilization == pytest.approx(
                sector_utilization(n, mac, slots), rel=0.02)


@pytest.fixture(scope="module")
def plan(mac, slots):
    scenario = generate_scenario(GeometryConfig(n=25, seed=3))
    return allocate_adaptive(scenario, AllocatorConfig(), mac, slots)


class TestConcurrency:
    def test_parallel_runs_match_sequential(self, mac, slots):
        from concurrent.futures import ThreadPoolExecutor

        seeds = list(range(12))
        sequential = [simulate_sector(4, mac, slots, max_slots=20_000, seed=s)
                      for s in seeds]
        with ThreadPoolExecutor(max_workers=4) as pool:
            parallel = list(pool.map(
                lambda s: simulate_sector(4, mac, slots, max_slots=20_000, seed=s),
                seeds))
        assert parallel == sequential


class TestSimulatePlan:

    def test_one_stats_per_sector(self, plan, mac, slots):
        stats = simulate_plan(plan, mac, slots, max_slots=20_000, seed=1)
        assert len(stats) == plan.q

    def test_empty_sector_zero_stats(self, mac, slots):
        from qobeam.sectors import SectorSpec
        plan = SectorPlan(sectors=(SectorSpec(0.0, 1.0, ()),), kind="fixed")
        stats = simulate_plan(plan, mac, slots, max_slots=10_000, seed=1)
        assert stats[0].total_slots == 0
        assert stats[0].elapsed == 0.0

    def test_permutation_invariance(self, plan, mac, slots):
        stats = simulate_plan(plan, mac, slots, max_slots=20_000, seed=9)
        reversed_plan = SectorPlan(sectors=tuple(reversed(plan.sectors)),
                                   kind=plan.kind)
        stats_rev = simulate_plan(reversed_plan, mac, slots, max_slots=20_000, seed=9)
        assert stats == list(reversed(stats_rev))

    def test_per_station_keys_are_member_ids(self, plan, mac, slots):
        stats = simulate_plan(plan, mac, slots, max_slots=5_000, seed=2)
        for spec, st in zip(plan.sectors, stats):
            assert set(st.per_station_successes) == set(spec.members)

    def test_sector_seed_content_keyed(self, plan):
        a, b = plan.sectors[0], plan.sectors[1]
        assert sector_seed(7, a) != sector_seed(7, b)
        assert sector_seed(7, a) == sector_seed(7, a)
        assert sector_seed(7, a) != sector_seed(8, a)
