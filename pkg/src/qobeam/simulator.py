"""Slot-level Monte Carlo oracle for saturated CSMA/CA contention.

Each slot, every station whose backoff counter is zero transmits: exactly
one transmitter makes a success slot, two or more a collision slot, none an
idle slot. All pending counters advance once per slot (the slot clock
itself stretches to the realised idle/success/collision duration, which is
where the busy airtime is accounted). Successful or dropped frames are
replaced immediately (saturation); a collision advances the backoff stage
up to the retry limit, after which the frame is dropped and a fresh one
queued at stage 0.

Randomness is an inline splitmix64 stream so runs are reproducible
bit-for-bit from the seed on any platform.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidParameterError
from .params import MacParams, SlotDurations
from .sectors import SectorPlan

_HUGE = np.int64(2 ** 62)


@dataclass(frozen=True)
class SimStats:
    """Tallies of one simulation run."""

    idle_slots: int
    success_slots: int
    collision_slots: int
    elapsed: float    # s
    per_station_successes: dict[int, int]
    empirical_tau: float
    empirical_p: float
    utilization: float

    @property
    def total_slots(self) -> int:
        return self.idle_slots + self.success_slots + self.collision_slots


@njit(cache=True)
def _simulate_core(n, w0, m, h, max_slots, target_successes, seed):  # pragma: no cover
    windows = np.empty(h + 1, np.int64)
    w_max = np.int64(2 ** m) * w0
    for i in range(h + 1):
        w = np.int64(2 ** i) * w0
        windows[i] = w if w < w_max else w_max

    state = np.uint64(seed)
    inv53 = 1.0 / 9007199254740992.0  # 2^-53

    def _next(state):
        state = state + np.uint64(0x9E3779B97F4A7C15)
        z = state
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        return state, np.float64(z >> np.uint64(11)) * inv53

    stage = np.zeros(n, np.int64)
    counter = np.empty(n, np.int64)
    per_station = np.zeros(n, np.int64)
    for s in range(n):
        state, u = _next(state)
        counter[s] = np.int64(u * w0)

    idle = np.int64(0)
    suc = np.int64(0)
    col = np.int64(0)
    attempts = np.int64(0)
    colliding = np.int64(0)
    slots = np.int64(0)

    while slots < max_slots and suc < target_successes:
        mn = counter[0]
        for s in range(1, n):
            if counter[s] < mn:
                mn = counter[s]
        if mn > 0:
            # a run of mn idle slots passes before the next transmission
            jump = mn
            if slots + jump > max_slots:
                jump = max_slots - slots
            idle += jump
            slots += jump
            for s in range(n):
                counter[s] -= jump
            continue
        ntx = np.int64(0)
        for s in range(n):
            if counter[s] == 0:
                ntx += 1
        attempts += ntx
        if ntx == 1:
            suc += 1
        else:
            col += 1
            colliding += ntx
        for s in range(n):
            if counter[s] == 0:
                if ntx == 1:
                    per_station[s] += 1
                    stage[s] = 0
                    w = w0
                elif stage[s] == h:
                    stage[s] = 0  # retry limit hit: frame dropped, fresh one queued
                    w = w0
                else:
                    stage[s] += 1
                    w = windows[stage[s]]
                state, u = _next(state)
                counter[s] = np.int64(u * w)
            else:
                counter[s] -= 1
        slots += 1

    return idle, suc, col, attempts, colliding, slots, per_station


def simulate_sector(n: int, mac: MacParams = MacParams(),
                    slots: SlotDurations | None = None, *,
                    max_slots: int | None = None,
                    target_successes: int | None = None,
                    seed: int = 0,
                    station_ids: tuple[int, ...] | None = None) -> SimStats:
    """Simulate one sector until the slot budget or success target is met."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if max_slots is None and target_successes is None:
        raise InvalidParameterError("provide max_slots and/or target_successes")
    if slots is None:
        from .params import TimingParams, slot_durations as _sd
        slots = _sd(TimingParams())
    if station_ids is None:
        station_ids = tuple(range(n))
    elif len(station_ids) != n:
        raise InvalidParameterError("station_ids length must equal n")

    budget = _HUGE if max_slots is None else np.int64(max_slots)
    target = _HUGE if target_successes is None else np.int64(target_successes)
    idle, suc, col, attempts, colliding, total, per_station = _simulate_core(
        n, np.int64(mac.w0), np.int64(mac.m), np.int64(mac.h),
        budget, target, np.uint64(seed % (2 ** 64)),
    )
    elapsed = idle * slots.t_idle + suc * slots.t_suc + col * slots.t_col
    return SimStats(
        idle_slots=int(idle),
        success_slots=int(suc),
        collision_slots=int(col),
        elapsed=float(elapsed),
        per_station_successes={sid: int(per_station[i]) for i, sid in enumerate(station_ids)},
        empirical_tau=float(attempts / (n * total)) if total > 0 else 0.0,
        empirical_p=float(colliding / attempts) if attempts > 0 else 0.0,
        utilization=float(suc * slots.e_payload / elapsed) if elapsed > 0 else 0.0,
    )


def sector_seed(master_seed: int, sector) -> int:
    """Seed derived from sector content, so permuting sectors changes nothing."""
    key = "{}|{:.12e}|{:.12e}|{}".format(
        master_seed, sector.start, sector.width, ",".join(map(str, sector.members))
    )
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "little")


def _empty_stats() -> SimStats:
    return SimStats(idle_slots=0, success_slots=0, collision_slots=0, elapsed=0.0,
                    per_station_successes={}, empirical_tau=0.0, empirical_p=0.0,
                    utilization=0.0)


def simulate_plan(plan: SectorPlan, mac: MacParams = MacParams(),
                  slots: SlotDurations | None = None, *,
                  max_slots: int | None = None,
                  target_successes: int | None = None,
                  seed: int = 0) -> list[SimStats]:
    """Simulate each sector independently (directionality isolates them)."""
    results = []
    for sec in plan.sectors:
        n_k = len(sec.members)
        if n_k == 0:
            results.append(_empty_stats())
            continue
        target = target_successes
        results.append(simulate_sector(
            n_k, mac, slots,
            max_slots=max_slots, target_successes=target,
            seed=sector_seed(seed, sec), station_ids=sec.members,
        ))
    return results
