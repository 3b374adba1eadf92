"""Receiver noise budget, electrical SNR, and achievable rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .channel import ChannelGain

ELECTRON_CHARGE = 1.602176634e-19  # C, exact

RATE_SNR_SCALE = math.e / (2.0 * math.pi)


@dataclass(frozen=True)
class NoiseParams:
    """Receiver-chain noise for intensity-modulation direct detection."""

    rin_db_per_hz: float = -155.0
    noise_current_density: float = 4.47e-12  # A/sqrt(Hz)
    tia_noise_figure_db: float = 5.0
    bandwidth_b: float = 1.5e9  # Hz
    electron_charge: float = ELECTRON_CHARGE

    def __post_init__(self) -> None:
        if self.bandwidth_b <= 0.0:
            raise ValueError(f"bandwidth_b must be positive, got {self.bandwidth_b}")
        if self.noise_current_density < 0.0:
            raise ValueError(
                f"noise_current_density must be nonnegative, got {self.noise_current_density}"
            )
        if self.rin_db_per_hz >= 0.0:
            raise ValueError(
                f"rin_db_per_hz must be negative, got {self.rin_db_per_hz}"
            )
        if self.electron_charge <= 0.0:
            raise ValueError("electron_charge must be positive")


@dataclass(frozen=True)
class LinkResult:
    """Per-user link outcome: received power, noise, electrical SNR, rate."""

    received_optical_power: float  # W
    noise_variance: float  # A^2
    sinr: float
    rate: float  # bit/s
    gain: ChannelGain | None = None

    def __post_init__(self) -> None:
        for name in ("received_optical_power", "noise_variance", "sinr", "rate"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")


def thermal_noise_variance(params: NoiseParams) -> float:
    """Input-referred preamplifier noise floor, independent of received power."""
    noise_figure = 10.0 ** (params.tia_noise_figure_db / 10.0)
    return params.noise_current_density**2 * params.bandwidth_b * noise_figure


def noise_variance(
    params: NoiseParams, received_optical_power: float, responsivity: float
) -> float:
    """Total shot + thermal + RIN current variance in A^2.

    shot    = 2 q R P B
    thermal = i_n^2 B 10^(NF_dB / 10)
    rin     = 10^(RIN_dB / 10) (R P)^2 B

    Strictly increasing in received power; the thermal floor keeps the
    variance positive in the dark.
    """
    if received_optical_power < 0.0:
        raise ValueError("received_optical_power must be nonnegative")
    if responsivity < 0.0:
        raise ValueError("responsivity must be nonnegative")
    photocurrent = responsivity * received_optical_power
    shot = 2.0 * params.electron_charge * photocurrent * params.bandwidth_b
    rin = 10.0 ** (params.rin_db_per_hz / 10.0) * photocurrent**2 * params.bandwidth_b
    return shot + thermal_noise_variance(params) + rin


def sinr(
    gain: ChannelGain, transmit_power: float, responsivity: float, sigma2: float
) -> float:
    """Electrical SNR (R q P)^2 / sigma^2; the model is noise-limited."""
    if sigma2 <= 0.0:
        raise ValueError("nonpositive noise variance")
    signal_current = responsivity * gain.q * transmit_power
    return signal_current * signal_current / sigma2


def achievable_rate(gamma: float, bandwidth: float) -> float:
    """Rate bound B log2(1 + (e / 2 pi) gamma) in bit/s."""
    if gamma < 0.0:
        raise ValueError(f"gamma must be nonnegative, got {gamma}")
    if bandwidth <= 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    return bandwidth * math.log2(1.0 + RATE_SNR_SCALE * gamma)


def sum_rate(rates: Sequence[float]) -> float:
    """Arithmetic sum of per-user rates."""
    for rate in rates:
        if rate < 0.0:
            raise ValueError(f"rates must be nonnegative, got {rate}")
    return float(sum(rates))
