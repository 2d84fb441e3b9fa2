"""Core value types and frame/slot duration arithmetic.

All dataclass defaults are the IEEE 802.11ad CBAP reference parameter set
(DMG control PHY at 27.5 Mb/s for RTS/DMG-CTS/ACK, MCS4 at 1.15 Gb/s for
data frames). Angles are radians internally, durations are seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MacParams:
    """Binary exponential backoff constants."""

    w0: int = 8   # minimum contention window, slots
    m: int = 3    # maximum backoff stage (window doubling stops here)
    h: int = 5    # retry limit (frame removed after stage h)

    def __post_init__(self):
        if self.w0 < 1:
            raise InvalidParameterError(f"w0 must be >= 1, got {self.w0}")
        if not 0 <= self.m <= self.h:
            raise InvalidParameterError(f"need 0 <= m <= h, got m={self.m} h={self.h}")

    @property
    def w_max(self) -> int:
        return (2 ** self.m) * self.w0

    def window(self, stage: int) -> int:
        """Contention window size at a given backoff stage."""
        if not 0 <= stage <= self.h:
            raise InvalidParameterError(f"stage must be in [0, {self.h}], got {stage}")
        return min((2 ** stage) * self.w0, self.w_max)


@dataclass(frozen=True)
class TimingParams:
    """Interframe spacings, frame sizes and PHY rates.

    ``timeout`` is the response timeout charged to a failed exchange; when
    None it defaults to the DMG CTS airtime (the sender knows no CTS arrived
    after one CTS airtime).
    """

    sifs: float = 2.5e-6          # s
    difs: float = 13.5e-6         # s
    cca_detect: float = 4.0e-6    # s
    rifs: float = 9.0e-6          # s, carried for completeness; no formula uses it
    rts_bytes: int = 20
    cts_bytes: int = 26
    ack_bytes: int = 14
    data_bytes: int = 1024
    control_rate: float = 27.5e6  # bit/s
    data_rate: float = 1.15e9     # bit/s
    timeout: float | None = None  # s, None -> DMG CTS airtime

    def __post_init__(self):
        for name in ("sifs", "difs", "cca_detect", "rifs"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")
        for name in ("rts_bytes", "cts_bytes", "ack_bytes", "data_bytes"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0")
        if self.control_rate <= 0 or self.data_rate <= 0:
            raise InvalidParameterError("rates must be > 0")
        if self.timeout is not None and self.timeout < 0:
            raise InvalidParameterError("timeout must be >= 0")


@dataclass(frozen=True)
class SlotDurations:
    """Durations of the three slot outcomes plus the payload airtime."""

    t_idle: float     # s, idle slot
    t_suc: float      # s, successful RTS/CTS/DATA/ACK exchange
    t_col: float      # s, collided RTS plus timeout
    e_payload: float  # s, airtime of one data payload frame


def frame_duration(size_octets: int, rate_bps: float) -> float:
    """Airtime of a frame: 8*size/rate."""
    if rate_bps <= 0:
        raise InvalidParameterError(f"rate must be > 0, got {rate_bps}")
    if size_octets < 0:
        raise InvalidParameterError(f"size must be >= 0, got {size_octets}")
    return 8.0 * size_octets / rate_bps


def slot_durations(t: TimingParams) -> SlotDurations:
    """Slot outcome durations implied by a timing parameter set."""
    t_rts = frame_duration(t.rts_bytes, t.control_rate)
    t_cts = frame_duration(t.cts_bytes, t.control_rate)
    t_ack = frame_duration(t.ack_bytes, t.control_rate)
    t_data = frame_duration(t.data_bytes, t.data_rate)
    timeout = t.timeout if t.timeout is not None else t_cts
    return SlotDurations(
        t_idle=t.sifs + t.cca_detect,
        t_suc=t_rts + 2.0 * t.sifs + t_cts + t.difs + t_data + t_ack,
        t_col=t_rts + t.sifs + t.difs + timeout,
        e_payload=t_data,
    )


@dataclass(frozen=True)
class Station:
    """One station, placed relative to the AP at the origin."""

    id: int
    distance: float  # m
    angle: float     # rad, normalised to [0, 2*pi)

    def __post_init__(self):
        if self.distance <= 0:
            raise InvalidParameterError(f"distance must be > 0, got {self.distance}")
        if not math.isfinite(self.angle):
            raise InvalidParameterError(f"angle must be finite, got {self.angle}")
        object.__setattr__(self, "angle", self.angle % TWO_PI)


@dataclass(frozen=True)
class Scenario:
    """AP-centred station layout."""

    stations: tuple[Station, ...] = field(default_factory=tuple)
    radius: float = 10.0  # m

    def __post_init__(self):
        object.__setattr__(self, "stations", tuple(self.stations))
        if self.radius <= 0:
            raise InvalidParameterError(f"radius must be > 0, got {self.radius}")
        ids = [s.id for s in self.stations]
        if len(ids) != len(set(ids)):
            raise InvalidParameterError("station ids must be unique")
        for s in self.stations:
            if s.distance > self.radius:
                raise InvalidParameterError(
                    f"station {s.id} at {s.distance} m lies outside radius {self.radius} m"
                )

    @property
    def n(self) -> int:
        return len(self.stations)
