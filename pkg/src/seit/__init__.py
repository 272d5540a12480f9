"""Fundamental limits of simultaneous energy and information transmission.

Capacity-energy functions of discrete and Gaussian point-to-point channels
with an energy harvester, the two-user Gaussian MAC information-energy
capacity region, eta-Nash equilibrium regions of the decentralized MAC, and a
Monte Carlo check of the harvested energy.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DiscreteEhChannel,
    EnergyBudget,
    GmacConfig,
    InputDistribution,
    PowerSplit,
    RateTriplet,
    binary_entropy,
    bsc,
    noiseless_binary,
    validate_gmac,
    z_channel,
)
from .dmc import SolverSettings, capacity_energy_function, simplex_oracle  # noqa: E402
from .gmac_game import Decoder, GameConfig  # noqa: E402

__all__ = [
    "Decoder",
    "DiscreteEhChannel",
    "EnergyBudget",
    "GameConfig",
    "GmacConfig",
    "InputDistribution",
    "PowerSplit",
    "RateTriplet",
    "SolverSettings",
    "binary_entropy",
    "bsc",
    "capacity_energy_function",
    "noiseless_binary",
    "simplex_oracle",
    "validate_gmac",
    "z_channel",
]
