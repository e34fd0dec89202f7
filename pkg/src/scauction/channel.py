"""Frequency-selective fading draws and per-subcarrier capacity grids.

Each ground station sees an independent tapped-delay-line channel with an
exponential power-delay profile normalized to unit total power, so the
frequency response satisfies E[|H|^2] = 1 on every subcarrier. Capacities
follow the Shannon formula per subcarrier, with external interference added
to the noise floor where an interference block is configured.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ConfigError, ScenarioConfig


@dataclass
class ChannelRealization:
    """One draw of the downlink: complex gains per (station, subcarrier),
    plus the noise floor and per-subcarrier interference power."""

    gains: np.ndarray          # (num_gs, num_sc) complex
    noise_power: float
    interference: np.ndarray   # (num_sc,) linear power

    def __post_init__(self) -> None:
        if self.gains.ndim != 2:
            raise ValueError("gains must be a 2-D (station, subcarrier) array")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")
        if self.interference.shape != (self.gains.shape[1],):
            raise ValueError("interference must have one entry per subcarrier")
        if np.any(self.interference < 0):
            raise ValueError("interference power must be non-negative")

    @property
    def num_gs(self) -> int:
        return self.gains.shape[0]

    @property
    def num_sc(self) -> int:
        return self.gains.shape[1]


@dataclass
class CapacityGrid:
    """Per-(station, subcarrier) SNR and Shannon capacity in bit/s."""

    snr: np.ndarray           # (num_gs, num_sc)
    capacities: np.ndarray    # (num_gs, num_sc) bit/s
    sc_bandwidth_hz: float

    @property
    def num_gs(self) -> int:
        return self.capacities.shape[0]

    @property
    def num_sc(self) -> int:
        return self.capacities.shape[1]


def interference_vector(config: ScenarioConfig) -> np.ndarray:
    """Sum of configured interference blocks, one linear power per subcarrier."""
    vec = np.zeros(config.num_sc)
    for profile in config.interference:
        vec[profile.start_sc : profile.end_sc + 1] += profile.power
    return vec


def generate_channel(config: ScenarioConfig, seed: int) -> ChannelRealization:
    """Draw one channel realization, deterministic for a fixed (config, seed).

    Taps are i.i.d. circular complex Gaussians weighted by an exponential
    power-delay profile exp(-l / pdp_decay), normalized so tap powers sum to
    one. The per-subcarrier response is the DFT of the tap vector.
    """
    if config.num_taps > config.num_sc:
        raise ConfigError("num_taps must not exceed num_sc")
    rng = np.random.default_rng(seed)
    pdp = np.exp(-np.arange(config.num_taps) / config.pdp_decay)
    pdp /= pdp.sum()
    scale = np.sqrt(pdp / 2.0)
    shape = (config.num_gs, config.num_taps)
    taps = scale[None, :] * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    gains = np.fft.fft(taps, n=config.num_sc, axis=1)
    return ChannelRealization(
        gains=gains,
        noise_power=config.noise_power,
        interference=interference_vector(config),
    )


def capacity_grid(
    realization: ChannelRealization,
    tx_power_per_sc: float | np.ndarray,
    sc_bandwidth_hz: float = 1.0,
) -> CapacityGrid:
    """Shannon capacities for a transmit power, scalar or per-subcarrier.

    snr = P * |H|^2 / (noise + interference), capacity = B_sc * log2(1 + snr).
    """
    power = np.asarray(tx_power_per_sc, dtype=float)
    if power.ndim not in (0, 1):
        raise ValueError("tx_power_per_sc must be a scalar or a 1-D array")
    if power.ndim == 1 and power.shape != (realization.num_sc,):
        raise ValueError("per-subcarrier power must have one entry per subcarrier")
    if np.any(power < 0):
        raise ValueError("transmit power must be non-negative")
    if sc_bandwidth_hz <= 0:
        raise ValueError("sc_bandwidth_hz must be positive")
    gain2 = np.abs(realization.gains) ** 2
    denom = realization.noise_power + realization.interference
    snr = power[None, :] * gain2 / denom[None, :] if power.ndim == 1 else power * gain2 / denom[None, :]
    capacities = sc_bandwidth_hz * np.log2(1.0 + snr)
    return CapacityGrid(snr=snr, capacities=capacities, sc_bandwidth_hz=sc_bandwidth_hz)
