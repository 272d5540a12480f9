"""Decentralized G-MAC: each transmitter picks its own power split.

Actions are the information fractions beta_i in [0, 1]. A profile is worth
the decoder's achievable rate to each player when the harvester gets at least
b, and -1 to both otherwise (asymptotic version of the error/outage utility).
The closed-form eta-NE sets sit at beta = (1, 1) when b <= 1 + SNR21 + SNR22
and on the energy-equality curve above that.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import gmac_region as region
from .core import DomainError, GmacConfig, PowerSplit, RateTriplet, require_feasible
from .geometry import convex_hull

DEFAULT_GRID_STEP = 0.01


class Decoder(enum.Enum):
    SUD = "sud"
    SIC_1_BEFORE_2 = "sic12"
    SIC_2_BEFORE_1 = "sic21"

    @property
    def is_sic(self):
        return self is not Decoder.SUD


class Regime(enum.Enum):
    LOW_ENERGY = "low"
    HIGH_ENERGY = "high"


@dataclass(frozen=True)
class GameConfig:
    cfg: GmacConfig
    b: float
    decoder: Decoder = Decoder.SUD
    eta: float | None = None

    def __post_init__(self):
        b = require_feasible(self.b, region.mac_max_feasible_energy(self.cfg), "G-MAC")
        object.__setattr__(self, "b", b)
        if self.eta is None:
            object.__setattr__(self, "eta", rate_lipschitz(self.cfg) * DEFAULT_GRID_STEP)
        elif not self.eta >= 0:
            raise DomainError(f"eta must be >= 0, got {self.eta!r}")


@dataclass(frozen=True)
class NePoint:
    split: PowerSplit
    rates: RateTriplet
    regime: Regime
    decoder: Decoder = Decoder.SUD


def rate_lipschitz(cfg: GmacConfig) -> float:
    """Bound on |dR_i/dbeta_i| over [0, 1]^2 for every decoder, in bits.

    Each rate has the form 0.5 log2(1 + beta s / d) with d >= 1, whose
    derivative in beta is at most s / (2 ln 2).
    """
    return max(cfg.snr11, cfg.snr12) / (2.0 * math.log(2.0))


def decoder_rates(cfg: GmacConfig, split: PowerSplit, decoder: Decoder):
    b1, b2 = split
    p1, p2 = b1 * cfg.snr11, b2 * cfg.snr12
    sud1 = 0.5 * math.log2(1.0 + p1 / (1.0 + p2))
    sud2 = 0.5 * math.log2(1.0 + p2 / (1.0 + p1))
    if decoder is Decoder.SUD:
        return sud1, sud2
    if decoder is Decoder.SIC_1_BEFORE_2:
        return sud1, 0.5 * math.log2(1.0 + p2)
    return 0.5 * math.log2(1.0 + p1), sud2


def utility(game: GameConfig, split: PowerSplit):
    """(u1, u2): decoder rates if the energy floor is met, else (-1, -1)."""
    energy = region.energy_at_split(game.cfg, split)
    if energy < game.b - region.energy_tolerance(game.b):
        return (-1.0, -1.0)
    return decoder_rates(game.cfg, split, game.decoder)


def _regime(cfg, b):
    return Regime.LOW_ENERGY if b <= region.low_regime_threshold(cfg) else Regime.HIGH_ENERGY


def equilibrium_splits(cfg: GmacConfig, b: float, samples: int):
    """Splits of the closed-form NE set, sorted by beta1.

    High regime: ``samples`` values of beta1 swept over [0, 1 - k] with beta2
    solved from (1 - beta1)(1 - beta2) = k, plus the equal split
    beta1 = beta2 = 1 - sqrt(k).
    """
    b = require_feasible(b, region.mac_max_feasible_energy(cfg), "G-MAC")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if _regime(cfg, b) is Regime.LOW_ENERGY:
        return [PowerSplit(1.0, 1.0)]
    k = region.required_cross_product(cfg, b)
    if k >= 1.0:
        return [PowerSplit(0.0, 0.0)]
    top = 1.0 - k
    betas = set(np.linspace(0.0, top, samples).tolist()) if samples > 1 else {0.0}
    betas.add(1.0 - math.sqrt(k))
    splits = []
    for beta1 in sorted(betas):
        u1 = 1.0 - beta1
        if beta1 == 1.0 - math.sqrt(k):
            beta2 = beta1
        elif u1 <= k:
            # 1 - k rounds to 1 for tiny k
            beta2 = 0.0
        else:
            beta2 = min(max(1.0 - k / u1, 0.0), 1.0)
        splits.append(PowerSplit(beta1, beta2))
    return splits


def _ne_points(cfg, b, decoder, samples):
    regime = _regime(cfg, b)
    points = []
    for split in equilibrium_splits(cfg, b, samples):
        r1, r2 = decoder_rates(cfg, split, decoder)
        points.append(NePoint(split, RateTriplet(r1, r2, region.energy_at_split(cfg, split)), regime, decoder))
    return points


def sud_ne_set(cfg: GmacConfig, b: float, samples: int = 201):
    return _ne_points(cfg, b, Decoder.SUD, samples)


def sic_ne_set(cfg: GmacConfig, b: float, order: Decoder, samples: int = 201):
    if not order.is_sic:
        raise DomainError(f"SIC decoding order expected, got {order}")
    return _ne_points(cfg, b, order, samples)


@dataclass(frozen=True)
class NeRegion:
    points: list
    hull: list

    def by_decoder(self, decoder):
        return [p for p in self.points if p.decoder is decoder]


def ne_region_union(cfg: GmacConfig, b: float, samples: int = 201, decoders=tuple(Decoder)) -> NeRegion:
    """NE points of every decoder plus the convex hull of their rate pairs.

    The hull is the R1-R2 projection of the time-sharing closure N(b).
    """
    points = []
    for decoder in decoders:
        points.extend(_ne_points(cfg, b, decoder, samples))
    hull = convex_hull([(p.rates.r1, p.rates.r2) for p in points])
    return NeRegion(points, hull)


def action_grid(grid_step: float):
    """{0, step, ..., 1}; the step is shrunk so that 1 lands on the grid."""
    if not 0 < grid_step <= 0.1:
        raise DomainError(f"grid_step must lie in (0, 0.1], got {grid_step}")
    n = math.ceil(1.0 / grid_step - 1e-9)
    return np.linspace(0.0, 1.0, n + 1)


def _profile(player, own, other):
    return PowerSplit(own, other) if player == 1 else PowerSplit(other, own)


def best_response(game: GameConfig, player: int, opponent_beta: float, grid_step: float = DEFAULT_GRID_STEP) -> float:
    """Grid beta maximizing the player's utility; ties go to the largest beta."""
    if player not in (1, 2):
        raise DomainError(f"player must be 1 or 2, got {player}")
    best_beta, best_u = None, -math.inf
    for beta in action_grid(grid_step):
        u = utility(game, _profile(player, beta, opponent_beta))[player - 1]
        if u >= best_u:
            best_beta, best_u = float(beta), u
    return best_beta


def verify_eta_ne(game: GameConfig, split: PowerSplit, grid_step: float = DEFAULT_GRID_STEP):
    """Largest unilateral utility gain of each player over the deviation grid.

    Staying put counts as a deviation of zero gain, so both gains are >= 0;
    the profile is an eta-NE when both are <= game.eta.
    """
    current = utility(game, split)
    gains = []
    for player in (1, 2):
        own, other = (split.beta1, split.beta2) if player == 1 else (split.beta2, split.beta1)
        best = current[player - 1]
        for beta in action_grid(grid_step):
            best = max(best, utility(game, _profile(player, float(beta), other))[player - 1])
        gains.append(best - current[player - 1])
    return tuple(gains)


def is_eta_ne(game: GameConfig, split: PowerSplit, grid_step: float = DEFAULT_GRID_STEP) -> bool:
    return all(g <= game.eta for g in verify_eta_ne(game, split, grid_step))


@dataclass(frozen=True)
class Dynamics:
    trajectory: list
    converged: bool
    certified: bool
    rounds: int

    @property
    def terminal(self):
        return self.trajectory[-1]


def best_response_dynamics(
    game: GameConfig, initial: PowerSplit, grid_step: float = DEFAULT_GRID_STEP, max_iters: int = 50
) -> Dynamics:
    """Alternate best responses (player 1, then player 2) from ``initial``.

    Stops after the first round in which neither player changes action.
    Non-convergence is reported through ``converged``, not raised.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    trajectory = [initial]
    beta1, beta2 = initial
    converged = False
    rounds = 0
    for rounds in range(1, max_iters + 1):
        new1 = best_response(game, 1, beta2, grid_step)
        trajectory.append(PowerSplit(new1, beta2))
        new2 = best_response(game, 2, new1, grid_step)
        trajectory.append(PowerSplit(new1, new2))
        if new1 == beta1 and new2 == beta2:
            converged = True
            break
        beta1, beta2 = new1, new2
    terminal = trajectory[-1]
    certified = converged and is_eta_ne(game, terminal, grid_step)
    return Dynamics(trajectory, converged, certified, rounds)
