"""Scenario configuration, defaults, and strict JSON loading."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ConfigError(ValueError):
    """Raised when a scenario configuration is malformed or inconsistent."""


@dataclass(frozen=True)
class InterferenceProfile:
    """Contiguous block of subcarriers hit by persistent external interference.

    Both endpoints are inclusive subcarrier indices. Power is linear and uses
    the same reference as the noise floor.
    """

    start_sc: int
    end_sc: int
    power: float

    def validate(self, num_sc: int) -> None:
        if not isinstance(self.start_sc, int) or not isinstance(self.end_sc, int):
            raise ConfigError("interference block endpoints must be integers")
        if not 0 <= self.start_sc <= self.end_sc < num_sc:
            raise ConfigError(
                f"interference block [{self.start_sc}, {self.end_sc}] does not fit "
                f"into {num_sc} subcarriers"
            )
        if self.power < 0:
            raise ConfigError("interference power must be non-negative")


@dataclass
class ScenarioConfig:
    """Everything a Monte Carlo run needs, with defaults mirroring the
    16-station, 1024-subcarrier reference scenario.

    Power quantities are linear and normalized to ``noise_power``;
    ``tx_power_db`` is the per-subcarrier transmit power in dB relative to
    that floor. Demands are per-station downlink rates in bit/s; a station
    whose accumulated won capacity reaches its demand stops bidding for the
    rest of the auction. ``demands=None`` means never satisfied.
    """

    num_gs: int = 16
    num_sc: int = 1024
    total_bandwidth_hz: float = 240e6
    noise_power: float = 1.0
    num_taps: int = 16
    pdp_decay: float = 6.0
    interference: list[InterferenceProfile] = field(
        default_factory=lambda: [InterferenceProfile(300, 400, 100.0)]
    )
    tx_power_db: float = 3.0
    tx_power_db_grid: list[float] = field(
        default_factory=lambda: [0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0]
    )
    budgets: float | list[float] = 100.0
    demands: float | list[float] | None = 3.5e6
    pricing_policy: str = "first"
    max_rounds: int = 4
    max_sc_per_gs: int | None = 60
    max_bid_count: int | None = None
    rollover: bool = False
    trials: int = 100
    base_seed: int = 42
    detector_window: int = 100
    detector_threshold_fraction: float = 0.5
    adjacency_radius: int = 1

    def __post_init__(self) -> None:
        self.validate()

    # -- derived quantities -------------------------------------------------

    @property
    def sc_bandwidth_hz(self) -> float:
        return self.total_bandwidth_hz / self.num_sc

    @property
    def tx_power_linear(self) -> float:
        return self.noise_power * 10.0 ** (self.tx_power_db / 10.0)

    def power_linear(self, power_db: float) -> float:
        return self.noise_power * 10.0 ** (power_db / 10.0)

    def budget_vector(self) -> np.ndarray:
        return self._per_gs(self.budgets, "budgets")

    def demand_vector(self) -> np.ndarray:
        if self.demands is None:
            return np.full(self.num_gs, np.inf)
        return self._per_gs(self.demands, "demands")

    def _per_gs(self, value: float | list[float], name: str) -> np.ndarray:
        if isinstance(value, (int, float)):
            vec = np.full(self.num_gs, float(value))
        else:
            vec = np.asarray(value, dtype=float)
            if vec.shape != (self.num_gs,):
                raise ConfigError(
                    f"{name} list must have one entry per ground station "
                    f"({self.num_gs}), got {vec.shape}"
                )
        if np.any(vec < 0):
            raise ConfigError(f"{name} must be non-negative")
        return vec

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        if self.num_gs < 1:
            raise ConfigError("num_gs must be at least 1")
        if self.num_sc < 1:
            raise ConfigError("num_sc must be at least 1")
        if self.total_bandwidth_hz <= 0:
            raise ConfigError("total_bandwidth_hz must be positive")
        if self.noise_power <= 0:
            raise ConfigError("noise_power must be positive")
        if self.num_taps < 1:
            raise ConfigError("num_taps must be at least 1")
        if self.pdp_decay <= 0:
            raise ConfigError("pdp_decay must be positive")
        for profile in self.interference:
            profile.validate(self.num_sc)
        if self.pricing_policy not in ("first", "second"):
            raise ConfigError("pricing_policy must be 'first' or 'second'")
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be at least 1")
        if self.max_sc_per_gs is not None and self.max_sc_per_gs < 1:
            raise ConfigError("max_sc_per_gs must be at least 1 when set")
        if self.max_bid_count is not None and self.max_bid_count < 1:
            raise ConfigError("max_bid_count must be at least 1 when set")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.detector_window < 1:
            raise ConfigError("detector_window must be at least 1")
        if not 0 < self.detector_threshold_fraction < 1:
            raise ConfigError("detector_threshold_fraction must lie in (0, 1)")
        if self.adjacency_radius < 1:
            raise ConfigError("adjacency_radius must be at least 1")
        if len(self.tx_power_db_grid) < 1:
            raise ConfigError("tx_power_db_grid must not be empty")
        self.budget_vector()
        self.demand_vector()

    # -- (de)serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["interference"] = [dataclasses.asdict(p) for p in self.interference]
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigError("configuration root must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        kwargs = dict(raw)
        if "interference" in kwargs:
            profiles = []
            for i, entry in enumerate(kwargs["interference"]):
                if not isinstance(entry, dict):
                    raise ConfigError(f"interference[{i}] must be an object")
                extra = set(entry) - {"start_sc", "end_sc", "power"}
                if extra:
                    raise ConfigError(
                        f"interference[{i}] has unknown keys: {sorted(extra)}"
                    )
                try:
                    profiles.append(InterferenceProfile(**entry))
                except TypeError as exc:
                    raise ConfigError(f"interference[{i}]: {exc}") from exc
            kwargs["interference"] = profiles
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text()
        except OSError:
            raise
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(raw)


def default_config(**overrides) -> ScenarioConfig:
    """Reference 16-station scenario; keyword overrides applied on top."""
    cfg = ScenarioConfig()
    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    for key, value in overrides.items():
        if key not in known:
            raise ConfigError(f"unknown configuration key: {key}")
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


def sdr_analogue_config(**overrides) -> ScenarioConfig:
    """Two-station, 512-subcarrier, 30-MHz scenario used for the small
    diversity-gap comparison. Cap and demand scale with the band."""
    base = dict(
        num_gs=2,
        num_sc=512,
        total_bandwidth_hz=30e6,
        interference=[InterferenceProfile(150, 200, 100.0)],
        max_sc_per_gs=384,
        demands=0.88e6,
    )
    base.update(overrides)
    return default_config(**base)
