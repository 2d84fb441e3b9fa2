"""60 GHz link-budget arithmetic and beamwidth inversion.

A perfect conical antenna of beamwidth omega has linear gain 2*pi/omega.
Received power follows a log-distance model referenced at 1 m, with fixed
fading and link-margin deductions, so the budget is affine in the transmit
gain (dB) and inverts in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidParameterError
from .params import TWO_PI

SPEED_OF_LIGHT = 2.998e8  # m/s


@dataclass(frozen=True)
class PhyEnv:
    """Radio environment for the budget."""

    tx_power: float = 10.0           # dBm
    frequency: float = 60e9          # Hz
    path_loss_exp: float = 2.0
    fading: float = 2.0              # dB
    link_margin: float = 20.0        # dB, absorbs localisation error
    sensitivities: dict[str, float] = field(
        default_factory=lambda: {"MCS0": -78.0, "MCS4": -64.0}
    )  # dBm per MCS

    def __post_init__(self):
        if self.frequency <= 0:
            raise InvalidParameterError("frequency must be > 0")
        if self.path_loss_exp <= 0:
            raise InvalidParameterError("path_loss_exp must be > 0")
        if not self.sensitivities:
            raise InvalidParameterError("sensitivities must be non-empty")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def reference_path_loss(self) -> float:
        """Path loss at the 1 m reference distance, dB."""
        return 10.0 * self.path_loss_exp * math.log10(4.0 * math.pi / self.wavelength)


def directivity_gain(beamwidth: float) -> float:
    """Linear gain of a conical beam; callers convert to dB as 10*log10."""
    if not 0.0 < beamwidth <= TWO_PI:
        raise InvalidParameterError(f"beamwidth must be in (0, 2*pi], got {beamwidth}")
    return TWO_PI / beamwidth


def _gain_db(beamwidth: float) -> float:
    return 10.0 * math.log10(directivity_gain(beamwidth))


def received_power(d: float, tx_bw: float, rx_bw: float, env: PhyEnv) -> float:
    """Received power in dBm at distance d (>= 1 m, the model's reference)."""
    if d < 1.0:
        raise InvalidParameterError(f"model undefined below the 1 m reference, got d={d}")
    return (
        env.tx_power
        + _gain_db(tx_bw)
        + _gain_db(rx_bw)
        - env.reference_path_loss
        - 10.0 * env.path_loss_exp * math.log10(d)
        - env.fading
        - env.link_margin
    )


def max_tx_beamwidth(d: float, rx_bw: float, mcs: str, env: PhyEnv,
                     min_beamwidth: float = 0.0) -> float | None:
    """Widest transmit beam that still closes the budget for an MCS.

    Returns 2*pi when even an omni beam satisfies the sensitivity, and None
    when the required beam is narrower than ``min_beamwidth`` (the antenna's
    resolution floor).
    """
    if mcs not in env.sensitivities:
        raise InvalidParameterError(
            f"unknown MCS {mcs!r}; available: {sorted(env.sensitivities)}"
        )
    if d < 1.0:
        raise InvalidParameterError(f"model undefined below the 1 m reference, got d={d}")
    rs = env.sensitivities[mcs]
    needed_gain_db = (
        rs
        - env.tx_power
        - _gain_db(rx_bw)
        + env.reference_path_loss
        + 10.0 * env.path_loss_exp * math.log10(d)
        + env.fading
        + env.link_margin
    )
    if needed_gain_db <= 0.0:
        return TWO_PI
    omega = TWO_PI / (10.0 ** (needed_gain_db / 10.0))
    if omega < min_beamwidth:
        return None
    return omega


def required_tx_beamwidth_curve(rx_bw_range, mcs: str, d: float, env: PhyEnv,
                                min_beamwidth: float = 0.0):
    """(rx_bw, tx_bw) pairs for a sweep of receive beamwidths."""
    return [(rx, max_tx_beamwidth(d, rx, mcs, env, min_beamwidth)) for rx in rx_bw_range]
