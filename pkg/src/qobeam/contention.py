"""Saturation model of per-sector CSMA/CA contention.

Two interchangeable solvers produce the (p, tau) operating point of a
sector with n saturated stations:

* ``closed-form``   -- the published closed-form expressions for b00 and
  tau, evaluated verbatim (geometric sums keep the p = 0.5 removable
  singularity finite).
* ``numeric-chain`` -- builds the per-station backoff Markov chain (stages
  0..h, uniform draw over [0, W_i - 1], every slot advances pending
  counters by one, a collision advances the stage, success or a stage-h
  exit returns to stage 0) and solves its stationary distribution
  numerically.

Both are closed through p = 1 - (1 - tau)^(n-1) by bisection. The two
methods disagree for the default backoff constants (the closed form yields
tau(p=0) = 2/(W0 + 2^m*W0 + 2) instead of the chain's 2/(W0+1)); the
numeric chain is the default because it reproduces the expected
utilization-versus-n behaviour, and ``qobeam validate`` reports the gap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError, SolverFailure
from .params import MacParams, SlotDurations

CLOSED_FORM = "closed-form"
NUMERIC_CHAIN = "numeric-chain"
METHODS = (CLOSED_FORM, NUMERIC_CHAIN)

FIXED_POINT_TOL = 1e-10
_MAX_ITER = 200


@dataclass(frozen=True)
class ContentionSolution:
    """Self-consistent operating point of one sector."""

    n: int
    p: float    # conditional collision probability
    tau: float  # per-slot transmission probability
    b00: float  # stationary probability of backoff state (0, 0)
    method: str


@dataclass(frozen=True)
class SlotProbabilities:
    """Idle / success / collision split of a random slot."""

    p_idle: float
    p_suc: float
    p_col: float


def p_of_tau(tau: float, n: int) -> float:
    """Collision probability seen by a transmitting station among n peers."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameterError(f"tau must be in [0, 1], got {tau}")
    return 1.0 - (1.0 - tau) ** (n - 1)


def tau_of_p(p: float, mac: MacParams) -> tuple[float, float]:
    """Closed-form (tau, b00) for a given collision probability.

    Uses explicit geometric sums for (1-x^(m+1))/(1-x), which is the
    analytic continuation at the p = 0.5 and p = 0 removable points.
    """
    if not 0.0 <= p < 1.0:
        raise InvalidParameterError(f"p must be in [0, 1), got {p}")
    w0, m, h = mac.w0, mac.m, mac.h
    sum_2p = sum((2.0 * p) ** k for k in range(m + 1))  # (1-(2p)^(m+1))/(1-2p)
    sum_p = sum(p ** k for k in range(m + 1))           # (1-p^(m+1))/(1-p)
    denom = (
        w0 * (1.0 - p) * sum_2p
        + (1.0 - p ** (m + 1))
        + (mac.w_max + 1) * (1.0 - p ** (h - m))
    )
    b00 = 2.0 * (1.0 - p) / denom
    return sum_p * b00, b00


def _chain_windows(mac: MacParams) -> list[int]:
    return [mac.window(i) for i in range(mac.h + 1)]


def chain_stationary(p: float, mac: MacParams) -> tuple[float, float]:
    """(tau, b00) of the per-station backoff chain at collision probability p.

    States are (stage i, counter k) with k in [0, W_i - 1]. Counters larger
    than zero step down once per slot; a station at k = 0 transmits, then
    either returns to stage 0 (success, or any outcome at stage h) or moves
    to stage i+1 (collision), drawing the next counter uniformly.
    """
    if not 0.0 <= p < 1.0:
        raise InvalidParameterError(f"p must be in [0, 1), got {p}")
    windows = _chain_windows(mac)
    offsets = np.cumsum([0] + windows[:-1])
    size = int(sum(windows))
    t = np.zeros((size, size))
    w0 = windows[0]
    for i, w in enumerate(windows):
        base = offsets[i]
        for k in range(1, w):
            t[base + k, base + k - 1] = 1.0
        if i < mac.h:
            t[base, offsets[0]:offsets[0] + w0] += (1.0 - p) / w0
            nxt = windows[i + 1]
            t[base, offsets[i + 1]:offsets[i + 1] + nxt] += p / nxt
        else:
            t[base, offsets[0]:offsets[0] + w0] += 1.0 / w0
    a = t.T - np.eye(size)
    a[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    pi = np.linalg.solve(a, b)
    tau = float(sum(pi[offsets[i]] for i in range(mac.h + 1)))
    return tau, float(pi[offsets[0]])


def _solve(n: int, mac: MacParams, tau_fn, method: str) -> ContentionSolution:
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if n == 1:
        tau, b00 = tau_fn(0.0, mac)
        return ContentionSolution(n=1, p=0.0, tau=tau, b00=b00, method=method)

    def residual(p: float) -> float:
        return p - p_of_tau(tau_fn(p, mac)[0], n)

    lo, hi = 0.0, 1.0 - 1e-12
    f_lo = residual(lo)
    if f_lo >= 0.0:  # tau(0) already self-consistent only when it is 0
        p_star = lo
    else:
        f_hi = residual(hi)
        if f_hi < 0.0:
            raise SolverFailure(f"no sign change on [0, 1) for n={n}", f_hi)
        for _ in range(_MAX_ITER):
            mid = 0.5 * (lo + hi)
            f_mid = residual(mid)
            if f_mid < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-13:
                break
        p_star = 0.5 * (lo + hi)
    res = residual(p_star)
    if abs(res) > FIXED_POINT_TOL:
        raise SolverFailure(f"fixed point did not converge for n={n}", res)
    tau, b00 = tau_fn(p_star, mac)
    return ContentionSolution(n=n, p=p_star, tau=tau, b00=b00, method=method)


@lru_cache(maxsize=4096)
def solve_fixed_point(n: int, mac: MacParams = MacParams()) -> ContentionSolution:
    """Self-consistent (p, tau) from the closed-form expressions."""
    return _solve(n, mac, tau_of_p, CLOSED_FORM)


@lru_cache(maxsize=4096)
def solve_markov_numeric(n: int, mac: MacParams = MacParams()) -> ContentionSolution:
    """Self-consistent (p, tau) from the numerically solved backoff chain."""
    return _solve(n, mac, chain_stationary, NUMERIC_CHAIN)


def solve_contention(n: int, mac: MacParams = MacParams(),
                     method: str = NUMERIC_CHAIN) -> ContentionSolution:
    """Dispatch to the requested solver."""
    if method == CLOSED_FORM:
        return solve_fixed_point(n, mac)
    if method == NUMERIC_CHAIN:
        return solve_markov_numeric(n, mac)
    raise InvalidParameterError(f"unknown method {method!r}, expected one of {METHODS}")


def slot_probabilities(n: int, tau: float) -> SlotProbabilities:
    """Idle/success/collision probabilities of one slot with n stations."""
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameterError(f"tau must be in [0, 1], got {tau}")
    p_idle = (1.0 - tau) ** n
    p_suc = n * tau * (1.0 - tau) ** (n - 1)
    return SlotProbabilities(p_idle=p_idle, p_suc=p_suc, p_col=1.0 - p_suc - p_idle)


def utilization_from_solution(sol: ContentionSolution, slots: SlotDurations) -> float:
    """Fraction of channel time carrying successful payload."""
    probs = slot_probabilities(sol.n, sol.tau)
    denom = probs.p_idle * slots.t_idle + probs.p_suc * slots.t_suc + probs.p_col * slots.t_col
    return probs.p_suc * slots.e_payload / denom


def sector_utilization(n: int, mac: MacParams = MacParams(),
                       slots: SlotDurations | None = None,
                       method: str = NUMERIC_CHAIN) -> float:
    """Channel utilization of a sector holding n saturated stations.

    n = 0 is legal (an empty sector carries nothing) and returns 0 without
    invoking the solver.
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0.0
    if slots is None:
        from .params import TimingParams, slot_durations as _sd
        slots = _sd(TimingParams())
    return utilization_from_solution(solve_contention(n, mac, method), slots)


def network_utilization(per_sector: list[float]) -> float:
    """Mean utilization over sectors sharing the interval equally."""
    if not per_sector:
        raise InvalidParameterError("per_sector must be non-empty")
    return sum(per_sector) / len(per_sector)
