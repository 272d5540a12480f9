"""Monte Carlo block simulation of the energy delivered to the harvester.

Each transmitter superposes an independent Gaussian information symbol and a
Gaussian energy symbol shared by both transmitters:

    X_i = sqrt(beta_i P_i) U_i + sqrt((1 - beta_i) P_i) W
    S   = h21 X1 + h22 X2 + Q

and the block energy rate is the average of S^2. No channel code is
simulated; only the energy side is checked empirically.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, GmacConfig, PowerSplit, validate_gmac
from .gmac_region import energy_at_split

CHUNK = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo setup.

    Without ``gains``/``powers`` the SNRs are factored as P_i = 1 and
    h_ji = sqrt(SNR_ji); the report depends on the SNRs only.
    ``epsilon_slack`` defaults to 1% of ``b_target``.
    """

    cfg: GmacConfig
    split: PowerSplit
    block_length: int = 100_000
    b_target: float = 0.0
    epsilon_slack: float | None = None
    trials: int = 50
    seed: int = 0
    gains: tuple | None = None
    powers: tuple | None = None

    def __post_init__(self):
        if self.block_length < 1 or self.trials < 1:
            raise DomainError("block_length and trials must be >= 1")
        if self.epsilon_slack is None:
            eps = 0.01 * self.b_target
            object.__setattr__(self, "epsilon_slack", eps if eps > 0 else 1e-9)
        if not self.epsilon_slack > 0:
            raise DomainError("epsilon_slack must be > 0")
        if (self.gains is None) != (self.powers is None):
            raise DomainError("gains and powers must be given together")
        if self.gains is not None:
            derived = validate_gmac(*self.gains, *self.powers)
            object.__setattr__(self, "cfg", derived)
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def harvester_gains_and_powers(self):
        if self.gains is not None:
            _, _, h21, h22 = self.gains
            return (h21, h22), tuple(self.powers)
        return (math.sqrt(self.cfg.snr21), math.sqrt(self.cfg.snr22)), (1.0, 1.0)


@dataclass(frozen=True)
class SimReport:
    empirical_energy_rate: np.ndarray = field(repr=False)
    cross_term_rate: np.ndarray = field(repr=False)
    outage_fraction: float
    analytic_energy_rate: float
    standard_error: float
    b_target: float
    epsilon_slack: float

    @property
    def mean_energy_rate(self):
        return float(np.mean(self.empirical_energy_rate))

    @property
    def per_trial_std(self):
        return float(np.std(self.empirical_energy_rate, ddof=1)) if len(self.empirical_energy_rate) > 1 else 0.0

    def to_dict(self):
        return {
            "empirical_energy_rate": self.empirical_energy_rate.tolist(),
            "cross_term_rate": self.cross_term_rate.tolist(),
            "mean_energy_rate": self.mean_energy_rate,
            "outage_fraction": self.outage_fraction,
            "analytic_energy_rate": self.analytic_energy_rate,
            "standard_error": self.standard_error,
            "b_target": self.b_target,
            "epsilon_slack": self.epsilon_slack,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            empirical_energy_rate=np.asarray(data["empirical_energy_rate"], dtype=float),
            cross_term_rate=np.asarray(data["cross_term_rate"], dtype=float),
            outage_fraction=float(data["outage_fraction"]),
            analytic_energy_rate=float(data["analytic_energy_rate"]),
            standard_error=float(data["standard_error"]),
            b_target=float(data["b_target"]),
            epsilon_slack=float(data["epsilon_slack"]),
        )


def _trial(sim: SimConfig, index: int):
    # one independent stream per (seed, trial) so scheduling cannot matter
    rng = np.random.default_rng(np.random.SeedSequence(sim.seed, spawn_key=(index,)))
    (h21, h22), (p1, p2) = sim.harvester_gains_and_powers()
    b1, b2 = sim.split
    a1, c1 = math.sqrt(b1 * p1), math.sqrt((1.0 - b1) * p1)
    a2, c2 = math.sqrt(b2 * p2), math.sqrt((1.0 - b2) * p2)
    energy = 0.0
    cross = 0.0
    remaining = sim.block_length
    while remaining:
        m = min(remaining, CHUNK)
        u1, u2, w, q = rng.standard_normal((4, m))
        x1 = a1 * u1 + c1 * w
        x2 = a2 * u2 + c2 * w
        s = h21 * x1 + h22 * x2 + q
        energy += float(np.dot(s, s))
        cross += 2.0 * h21 * h22 * float(np.dot(x1, x2))
        remaining -= m
    return energy / sim.block_length, cross / sim.block_length


def worker_count():
    """Worker cap from SEIT_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("SEIT_THREADS", "1")))
    except ValueError:
        return 1


def _run_trials(sim: SimConfig):
    workers = worker_count()
    indices = range(sim.trials)
    if workers == 1:
        results = [_trial(sim, i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _trial(sim, i), indices))
    rates = np.array([r[0] for r in results])
    cross = np.array([r[1] for r in results])
    return rates, cross


def simulate_blocks(sim: SimConfig) -> SimReport:
    rates, cross = _run_trials(sim)
    se = float(np.std(rates, ddof=1) / math.sqrt(len(rates))) if len(rates) > 1 else math.nan
    return SimReport(
        empirical_energy_rate=rates,
        cross_term_rate=cross,
        outage_fraction=float(np.mean(rates < sim.b_target - sim.epsilon_slack)),
        analytic_energy_rate=energy_at_split(sim.cfg, sim.split),
        standard_error=se,
        b_target=sim.b_target,
        epsilon_slack=sim.epsilon_slack,
    )


def outage_curve(sim: SimConfig, b_grid, report: SimReport | None = None):
    """Outage fraction for each floor in ``b_grid`` from one simulated ensemble.

    A trial is in outage at floor b when its energy rate falls below
    b - epsilon_slack.
    """
    b_grid = list(b_grid)
    if not b_grid:
        raise ValueError("b_grid must be non-empty")
    if report is None:
        report = simulate_blocks(sim)
    rates = report.empirical_energy_rate
    return [(float(b), float(np.mean(rates < b - sim.epsilon_slack))) for b in b_grid]
