"""Information-energy capacity region of the two-user Gaussian MAC.

For a power split (beta1, beta2) the rates obey the usual MAC pentagon with
SNRs scaled by the betas, while the remaining power (1 - beta_i) is sent as a
common, fully correlated energy signal. The energy bound at the harvester is

    1 + SNR21 + SNR22 + 2 sqrt((1 - beta1) SNR21 (1 - beta2) SNR22)

and the region at floor b is the union over all splits whose bound reaches b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import GmacConfig, PowerSplit, RateTriplet, require_feasible

ENERGY_TOL = 1e-9
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def mac_max_feasible_energy(cfg: GmacConfig) -> float:
    """Energy rate reached when both transmitters send fully correlated inputs."""
    return 1.0 + cfg.snr21 + cfg.snr22 + 2.0 * math.sqrt(cfg.snr21 * cfg.snr22)


def low_regime_threshold(cfg: GmacConfig) -> float:
    """Largest floor met with all power on information: 1 + SNR21 + SNR22."""
    return 1.0 + cfg.snr21 + cfg.snr22


def energy_at_split(cfg: GmacConfig, split: PowerSplit) -> float:
    b1, b2 = split
    cross = (1.0 - b1) * cfg.snr21 * (1.0 - b2) * cfg.snr22
    return 1.0 + cfg.snr21 + cfg.snr22 + 2.0 * math.sqrt(cross)


def energy_grid(cfg, beta1, beta2):
    """Vectorized energy bound for broadcastable beta arrays."""
    cross = (1.0 - beta1) * cfg.snr21 * (1.0 - beta2) * cfg.snr22
    return 1.0 + cfg.snr21 + cfg.snr22 + 2.0 * np.sqrt(cross)


def required_cross_product(cfg: GmacConfig, b: float) -> float:
    """k such that the bound is >= b exactly when (1-beta1)(1-beta2) >= k.

    Zero in the low regime (every split qualifies).
    """
    excess = b - low_regime_threshold(cfg)
    if excess <= 0:
        return 0.0
    return min(1.0, (excess / (2.0 * math.sqrt(cfg.snr21 * cfg.snr22))) ** 2)


def energy_tolerance(b):
    return ENERGY_TOL * max(1.0, abs(b))


def _half_log(x):
    return 0.5 * math.log2(1.0 + x)


def rate_bounds(cfg: GmacConfig, split: PowerSplit):
    """(C1, C2, Csum): the three pentagon bounds at ``split``."""
    b1, b2 = split
    return (
        _half_log(b1 * cfg.snr11),
        _half_log(b2 * cfg.snr12),
        _half_log(b1 * cfg.snr11 + b2 * cfg.snr12),
    )


def pentagon_corners(cfg: GmacConfig, split: PowerSplit):
    """Vertices of the rate pentagon at ``split``, counter-clockwise, deduplicated."""
    c1, c2, cs = rate_bounds(cfg, split)
    raw = [(0.0, 0.0), (c1, 0.0), (c1, max(cs - c1, 0.0)), (max(cs - c2, 0.0), c2), (0.0, c2)]
    corners = []
    for p in raw:
        if not corners or p != corners[-1]:
            corners.append(p)
    if len(corners) > 1 and corners[-1] == corners[0]:
        corners.pop()
    return corners


def golden_section_max(f, lo, hi, tol=1e-10):
    """Maximizer of a unimodal ``f`` on [lo, hi] to within ``tol``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = max((lo, hi, x), key=f)
    return best


class Membership(NamedTuple):
    contained: bool
    witness: Optional[PowerSplit]
    max_energy: float

    def __bool__(self):
        return self.contained


_OUTSIDE = Membership(False, None, -math.inf)


def _min_beta(rate, snr):
    need = 2.0 ** (2.0 * rate) - 1.0
    if need <= 0:
        return 0.0
    if snr <= 0:
        return math.inf
    return need / snr


def best_energy_for_rates(cfg: GmacConfig, r1: float, r2: float):
    """Largest energy bound over splits supporting (r1, r2), with the split.

    Returns ``(energy, split)``, or ``(-inf, None)`` when no split supports
    the rates. The energy bound decreases in each beta, so the optimum sits
    at the component-wise minimal split if that meets the sum-rate
    constraint, and otherwise on the sum-rate line, searched in beta1.
    """
    lo1, lo2 = _min_beta(r1, cfg.snr11), _min_beta(r2, cfg.snr12)
    if lo1 > 1.0 or lo2 > 1.0:
        return -math.inf, None
    s11, s12 = cfg.snr11, cfg.snr12
    need = 2.0 ** (2.0 * (r1 + r2)) - 1.0
    # with a zero SNR the corresponding rate is zero and the sum constraint
    # reduces to the other individual one, already met at the minimal split
    if lo1 * s11 + lo2 * s12 >= need * (1.0 - 1e-12) or s11 == 0 or s12 == 0:
        split = PowerSplit(lo1, lo2)
        return energy_at_split(cfg, split), split
    if s11 + s12 < need * (1.0 - 1e-12):
        return -math.inf, None
    # beta2 = (need - beta1 s11) / s12 must stay within [lo2, 1]
    a = max(lo1, (need - s12) / s11)
    b = min(1.0, (need - lo2 * s12) / s11)
    if a > b:
        a = b = min(a, 1.0)

    def beta2_of(beta1):
        return min(max((need - beta1 * s11) / s12, lo2), 1.0)

    def energy(beta1):
        return float(energy_grid(cfg, beta1, beta2_of(beta1)))

    beta1 = a if b - a <= 1e-15 else golden_section_max(energy, a, b)
    split = PowerSplit(min(max(beta1, 0.0), 1.0), beta2_of(beta1))
    return energy_at_split(cfg, split), split


def region_contains(cfg: GmacConfig, b: float, triplet: RateTriplet, tol: float = 1e-9) -> Membership:
    """Does (R1, R2, B) belong to the capacity region at energy floor ``b``?

    The triplet's own B and the floor b act as one requirement max(b, B).
    Ties within ``tol`` count as inside (the region is closed); a true answer
    carries a witness split.
    """
    b = require_feasible(b, mac_max_feasible_energy(cfg), "G-MAC")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    target = max(b, triplet.b)
    energy, split = best_energy_for_rates(cfg, triplet.r1, triplet.r2)
    if split is None:
        return _OUTSIDE
    return Membership(energy >= target - tol, split, energy)


def sum_rate_at_energy(cfg: GmacConfig, b: float, tol: float = 1e-10):
    """Maximum R1 + R2 with energy bound >= b, and the maximizing split.

    Low regime: (1, 1). Otherwise the split lies on the energy-equality curve
    (1-beta1)(1-beta2) = k; beta2 is tied to beta1 through it and the sum
    rate is maximized over beta1 by golden-section search.
    """
    b = require_feasible(b, mac_max_feasible_energy(cfg), "G-MAC")
    if b <= low_regime_threshold(cfg):
        split = PowerSplit(1.0, 1.0)
        return rate_bounds(cfg, split)[2], split
    k = required_cross_product(cfg, b)
    if k >= 1.0:
        split = PowerSplit(0.0, 0.0)
        return 0.0, split

    def beta2_of(beta1):
        if 1.0 - beta1 <= k:
            return 0.0
        return min(max(1.0 - k / (1.0 - beta1), 0.0), 1.0)

    def sum_rate(beta1):
        return beta1 * cfg.snr11 + beta2_of(beta1) * cfg.snr12

    beta1 = golden_section_max(sum_rate, 0.0, 1.0 - k, tol)
    split = PowerSplit(beta1, beta2_of(beta1))
    return rate_bounds(cfg, split)[2], split


@dataclass(frozen=True)
class RegionSample:
    split: PowerSplit
    corner_rates: tuple
    max_energy: float


def trace_boundary(cfg: GmacConfig, b: float, grid_steps: int):
    """Rate pentagons over a grid_steps x grid_steps lattice of feasible splits."""
    if grid_steps < 2:
        raise ValueError("grid_steps must be >= 2")
    b = require_feasible(b, mac_max_feasible_energy(cfg), "G-MAC")
    betas = np.linspace(0.0, 1.0, grid_steps)
    tol = energy_tolerance(b)
    samples = []
    for beta1 in betas:
        for beta2 in betas:
            split = PowerSplit(beta1, beta2)
            energy = energy_at_split(cfg, split)
            if energy >= b - tol:
                samples.append(RegionSample(split, tuple(pentagon_corners(cfg, split)), energy))
    return samples
