"""Seeded station-layout generation and scenario persistence.

Randomness comes from a Philox 4x64 counter-based generator keyed directly
by the seed, with explicit draw conventions so a layout is reproducible
bit-for-bit from the seed alone: uniforms are the generator's 53-bit
doubles, and normals are Box-Muller transforms of uniform pairs (one pair
per angle). Distances are uniform on [dist_min, radius]; angles are normal
around angle_mean and wrapped into [0, 2*pi).
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ScenarioFormatError
from .params import TWO_PI, Scenario, Station


@dataclass(frozen=True)
class GeometryConfig:
    """Placement distribution of the stations around the AP."""

    n: int = 50
    radius: float = 10.0            # m
    dist_min: float = 1.0           # m
    angle_mean: float = math.pi     # rad
    angle_std: float = math.pi / 2  # rad
    seed: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {self.n}")
        if not 0 < self.dist_min < self.radius:
            raise InvalidParameterError(
                f"need 0 < dist_min < radius, got {self.dist_min}, {self.radius}"
            )
        if self.angle_std < 0:
            raise InvalidParameterError("angle_std must be >= 0")


def generate_scenario(cfg: GeometryConfig) -> Scenario:
    """Draw a station layout; identical seeds give identical layouts."""
    if cfg.n == 0:
        return Scenario(stations=(), radius=cfg.radius)
    rng = np.random.Generator(np.random.Philox(key=np.uint64(cfg.seed)))
    u_dist = rng.random(cfg.n)
    u1 = rng.random(cfg.n)
    u2 = rng.random(cfg.n)
    distances = cfg.dist_min + (cfg.radius - cfg.dist_min) * u_dist
    # Box-Muller: 1-u1 keeps the log argument in (0, 1]
    z = np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(TWO_PI * u2)
    angles = (cfg.angle_mean + cfg.angle_std * z) % TWO_PI
    stations = tuple(
        Station(id=i, distance=float(distances[i]), angle=float(angles[i]))
        for i in range(cfg.n)
    )
    return Scenario(stations=stations, radius=cfg.radius)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "radius_m": s.radius,
        "stations": [
            {"id": st.id, "distance_m": st.distance, "angle_rad": st.angle}
            for st in s.stations
        ],
    }


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioFormatError("scenario must be a JSON object")
    try:
        radius = float(data["radius_m"])
        raw = data["stations"]
    except KeyError as exc:
        raise ScenarioFormatError(f"scenario is missing field {exc.args[0]!r}") from exc
    if not isinstance(raw, list):
        raise ScenarioFormatError("'stations' must be an array")
    stations = []
    for idx, entry in enumerate(raw):
        try:
            stations.append(
                Station(
                    id=int(entry["id"]),
                    distance=float(entry["distance_m"]),
                    angle=float(entry["angle_rad"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioFormatError(f"stations[{idx}] is malformed: {exc}") from exc
    try:
        return Scenario(stations=tuple(stations), radius=radius)
    except InvalidParameterError as exc:
        raise ScenarioFormatError(str(exc)) from exc


def save_scenario(s: Scenario, path: str | os.PathLike) -> None:
    """Write a scenario as JSON (full double precision)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scenario_to_dict(s), fh, indent=2)
        fh.write("\n")


def load_scenario(path: str | os.PathLike) -> Scenario:
    """Read a scenario written by save_scenario; validates all invariants."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return scenario_from_dict(data)
