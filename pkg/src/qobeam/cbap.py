"""Minimum contention-period duration needed to drain a sector's requests.

The estimate combines the expected idle (backoff) slots spent per delivered
frame with the expected number of busy slots needed for the requested number
of successes, each weighted by its slot duration.
"""
from __future__ import annotations

from dataclasses import dataclass

from .contention import NUMERIC_CHAIN, slot_probabilities, solve_contention
from .errors import InfeasibleError, InvalidParameterError
from .params import MacParams, SlotDurations


@dataclass(frozen=True)
class CbapEstimate:
    """Expected slot counts and the resulting duration."""

    n_id: float     # expected idle slots
    n_b_min: float  # expected busy slots (fractional, not rounded)
    t_b: float      # s, average busy slot duration
    t_cbap: float   # s


def expected_backoff_slots(stage: int, mac: MacParams = MacParams()) -> float:
    """Average backoff slots accumulated through the given stage.

    Half the sum of the windows of stages 0..stage; beyond stage m every
    extra stage contributes W_max/2.
    """
    if not 0 <= stage <= mac.h:
        raise InvalidParameterError(f"stage must be in [0, {mac.h}], got {stage}")
    capped = min(stage, mac.m)
    total = mac.w0 * (2 ** (capped + 1) - 1)  # sum of 2^k*W0 for k <= capped
    if stage > mac.m:
        total += (stage - mac.m) * mac.w_max
    return 0.5 * total


def expected_idle_slots(p: float, mac: MacParams = MacParams()) -> float:
    """Expected idle slots before a frame leaves the system.

    Stage i < h is reached-and-resolved with weight p^i*(1-p); the terminal
    stage h carries the remaining p^h mass whether it succeeds or drops.
    """
    if not 0.0 <= p < 1.0:
        raise InvalidParameterError(f"p must be in [0, 1), got {p}")
    total = sum(p ** i * (1.0 - p) * expected_backoff_slots(i, mac) for i in range(mac.h))
    total += p ** mac.h * expected_backoff_slots(mac.h, mac)
    return total


def busy_slot_probabilities(n: int, tau: float) -> tuple[float, float]:
    """Success/collision split of a slot known to be busy."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 < tau <= 1.0:
        raise InvalidParameterError(
            f"tau must be in (0, 1]; the conditional is undefined at tau={tau}"
        )
    probs = slot_probabilities(n, tau)
    # p_suc + p_col rather than 1 - p_idle: algebraically identical, but
    # keeps the two conditionals summing to one at float precision
    busy = probs.p_suc + probs.p_col
    return probs.p_suc / busy, probs.p_col / busy


def min_busy_slots(requests: int, p_suc_busy: float) -> float:
    """Expected busy slots needed for the requested number of successes."""
    if requests < 0:
        raise InvalidParameterError(f"requests must be >= 0, got {requests}")
    if requests == 0:
        return 0.0
    if p_suc_busy <= 0.0:
        raise InfeasibleError("conditional success probability is zero")
    return requests / p_suc_busy


def min_cbap_duration(requests: int, n: int,
                      mac: MacParams = MacParams(),
                      slots: SlotDurations | None = None,
                      method: str = NUMERIC_CHAIN,
                      idle_per_request: bool = True) -> CbapEstimate:
    """Minimum expected contention-period duration for a sector.

    ``requests`` successes are needed among ``n`` saturated stations.  With
    ``idle_per_request`` (default) the per-frame idle-slot expectation is
    charged once per request, since every delivered frame pays its own
    backoff; disabling it charges the idle expectation once per sector.
    """
    if requests < 0:
        raise InvalidParameterError(f"requests must be >= 0, got {requests}")
    if requests == 0:
        return CbapEstimate(n_id=0.0, n_b_min=0.0, t_b=0.0, t_cbap=0.0)
    if n < 1:
        raise InvalidParameterError("n must be >= 1 when requests > 0")
    if slots is None:
        from .params import TimingParams, slot_durations as _sd
        slots = _sd(TimingParams())
    sol = solve_contention(n, mac, method)
    n_id = expected_idle_slots(sol.p, mac)
    if idle_per_request:
        n_id *= requests
    p_suc_busy, p_col_busy = busy_slot_probabilities(n, sol.tau)
    t_b = p_suc_busy * slots.t_suc + p_col_busy * slots.t_col
    n_b = min_busy_slots(requests, p_suc_busy)
    return CbapEstimate(n_id=n_id, n_b_min=n_b, t_b=t_b,
                        t_cbap=n_id * slots.t_idle + n_b * t_b)
