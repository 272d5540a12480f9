"""Gaussian point-to-point channel with an energy harvester.

Under an average power constraint the information-optimal Gaussian input
also maximizes the harvested energy, so C(b) is flat on the feasible range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, require_feasible, validate_gmac


@dataclass(frozen=True)
class GaussianP2pConfig:
    snr1: float
    snr2: float

    def __post_init__(self):
        for name in ("snr1", "snr2"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_gains(cls, h1, h2, power):
        """SNRs h_i^2 P, requiring h1^2 + h2^2 <= 1."""
        cfg = validate_gmac(h1, 0.0, h2, 0.0, power, 0.0)
        return cls(cfg.snr11, cfg.snr21)


def p2p_max_energy(cfg: GaussianP2pConfig) -> float:
    return 1.0 + cfg.snr2


def p2p_info_energy_capacity(cfg: GaussianP2pConfig, b: float) -> float:
    """C(b) in bits per channel use; raises if b exceeds 1 + SNR2."""
    require_feasible(b, p2p_max_energy(cfg), "Gaussian channel")
    return 0.5 * math.log2(1.0 + cfg.snr1)
