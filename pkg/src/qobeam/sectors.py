"""Quasi-omni sector construction: greedy adaptive widths and the fixed grid.

The adaptive pass anchors the first sector at the smallest station angle,
starts each sector at the minimum beamwidth and keeps widening it by
delta_omega while the sector's contention utilization does not drop (ties
grow, so empty arcs are absorbed), committing the previous width otherwise.
Each next sector starts where the last one ended; an empty lead-in arc is
skipped by advancing the anchor to the next uncovered station. Total
traversal (sectors plus skipped arcs) is capped at one full circle, the
final sector being truncated to fit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .contention import NUMERIC_CHAIN, sector_utilization
from .errors import InvalidParameterError
from .params import TWO_PI, MacParams, Scenario, SlotDurations

_EPS = 1e-9


@dataclass(frozen=True)
class SectorSpec:
    """One sector: start angle, width and the stations it covers."""

    start: float                 # rad in [0, 2*pi)
    width: float                 # rad
    members: tuple[int, ...]     # station ids inside [start, start+width)

    def __post_init__(self):
        object.__setattr__(self, "start", self.start % TWO_PI)
        if self.width < 0 or self.width > TWO_PI + _EPS:
            raise InvalidParameterError(f"width must be in [0, 2*pi], got {self.width}")
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class SectorPlan:
    """Ordered, non-overlapping sectors covering the stations."""

    sectors: tuple[SectorSpec, ...]
    kind: str                           # "adaptive" | "fixed"
    uncovered: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "uncovered", tuple(self.uncovered))

    @property
    def q(self) -> int:
        return len(self.sectors)

    def member_counts(self) -> list[int]:
        return [len(s.members) for s in self.sectors]


@dataclass(frozen=True)
class AllocatorConfig:
    """Beamwidth limits of the adaptive pass."""

    omega_min: float = math.pi / 9    # rad (20 deg)
    delta_omega: float = math.pi / 9  # rad
    omega_max: float = math.pi / 2    # rad (90 deg)

    def __post_init__(self):
        if not 0 < self.omega_min <= self.omega_max <= TWO_PI:
            raise InvalidParameterError(
                f"need 0 < omega_min <= omega_max <= 2*pi, got "
                f"{self.omega_min}, {self.omega_max}"
            )
        if self.delta_omega <= 0:
            raise InvalidParameterError("delta_omega must be > 0")


def stas_in_arc(scenario: Scenario, start: float, width: float) -> list[int]:
    """Ids of stations with angle in [start, start+width), wrapping at 2*pi."""
    if width < 0:
        raise InvalidParameterError(f"width must be >= 0, got {width}")
    if width == 0:
        return []
    start = start % TWO_PI
    return [s.id for s in scenario.stations if (s.angle - start) % TWO_PI < width]


def allocate_fixed(scenario: Scenario, width: float = math.pi / 2) -> SectorPlan:
    """Equal-width sectors starting at angle 0; width must divide 2*pi."""
    if width <= 0:
        raise InvalidParameterError(f"width must be > 0, got {width}")
    q_float = TWO_PI / width
    q = round(q_float)
    if q < 1 or abs(q_float - q) > 1e-9:
        raise InvalidParameterError(
            f"width {width} does not divide the full circle (2*pi/width = {q_float})"
        )
    sectors = tuple(
        SectorSpec(start=k * width, width=width,
                   members=tuple(stas_in_arc(scenario, k * width, width)))
        for k in range(q)
    )
    return SectorPlan(sectors=sectors, kind="fixed")


def allocate_adaptive(scenario: Scenario, cfg: AllocatorConfig = AllocatorConfig(),
                      mac: MacParams = MacParams(),
                      slots: SlotDurations | None = None,
                      method: str = NUMERIC_CHAIN) -> SectorPlan:
    """Grow sectors greedily by utilization; deterministic for a given input."""
    if not scenario.stations:
        return SectorPlan(sectors=(), kind="adaptive")

    util_cache: dict[int, float] = {}

    def util(count: int) -> float:
        if count not in util_cache:
            util_cache[count] = sector_utilization(count, mac, slots, method)
        return util_cache[count]

    def count_in(start: float, width: float) -> int:
        return len(stas_in_arc(scenario, start, width))

    uncovered = {s.id: s.angle for s in scenario.stations}
    anchor = min(uncovered.values())
    traversed = 0.0
    sectors: list[SectorSpec] = []

    while uncovered and TWO_PI - traversed > _EPS:
        remaining = TWO_PI - traversed
        lead_width = min(cfg.omega_min, remaining)
        if count_in(anchor, lead_width) == 0:
            # empty lead-in: jump straight to the next uncovered station
            delta = min((a - anchor) % TWO_PI for a in uncovered.values())
            if delta >= remaining - _EPS:
                break  # nothing reachable before the circle closes
            traversed += delta
            anchor = (anchor + delta) % TWO_PI
            remaining = TWO_PI - traversed

        width = min(cfg.omega_min, remaining)
        u_prev = util(count_in(anchor, width))
        step = 1
        while True:
            w_next = cfg.omega_min + step * cfg.delta_omega
            if w_next > cfg.omega_max + _EPS or w_next > remaining + _EPS:
                break
            u_next = util(count_in(anchor, w_next))
            if u_next >= u_prev:
                width, u_prev = w_next, u_next
                step += 1
            else:
                break
        # filter by the uncovered set: when the final sector closes the full
        # circle, float rounding of the wrap boundary must not re-claim the
        # very first station
        members = tuple(sid for sid in stas_in_arc(scenario, anchor, width)
                        if sid in uncovered)
        sectors.append(SectorSpec(start=anchor, width=width, members=members))
        for sid in members:
            uncovered.pop(sid, None)
        traversed += width
        anchor = (anchor + width) % TWO_PI

    return SectorPlan(sectors=tuple(sectors), kind="adaptive",
                      uncovered=tuple(sorted(uncovered)))


def plan_to_dict(plan: SectorPlan) -> dict:
    data = {
        "kind": plan.kind,
        "q": plan.q,
        "sectors": [
            {"start_rad": s.start, "width_rad": s.width, "members": list(s.members)}
            for s in plan.sectors
        ],
    }
    if plan.uncovered:
        data["uncovered"] = list(plan.uncovered)
    return data


def plan_from_dict(data: dict) -> SectorPlan:
    from .errors import ScenarioFormatError

    try:
        sectors = tuple(
            SectorSpec(start=float(s["start_rad"]), width=float(s["width_rad"]),
                       members=tuple(int(i) for i in s["members"]))
            for s in data["sectors"]
        )
        return SectorPlan(sectors=sectors, kind=str(data["kind"]),
                          uncovered=tuple(int(i) for i in data.get("uncovered", ())))
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(f"malformed sector plan: {exc}") from exc
