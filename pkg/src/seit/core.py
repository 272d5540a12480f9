"""Shared domain types, physical-constraint validation and small numeric helpers.

Noise variances are normalized to one everywhere, so a Gaussian link is fully
described by its linear SNR. All types are frozen after construction and
reject invalid values eagerly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PROB_TOL = 1e-12
NORM_TOL = 1e-12


class SeitError(Exception):
    """Base class for toolkit errors."""


class DomainError(SeitError, ValueError):
    pass


class ShapeError(SeitError, ValueError):
    pass


class InfeasibleEnergyError(SeitError, ValueError):
    """Requested energy rate exceeds the maximum feasible one."""

    def __init__(self, b, b_max, what="channel"):
        self.b = b
        self.b_max = b_max
        super().__init__(
            f"infeasible energy rate b={b:g} for this {what}: "
            f"maximum feasible energy rate is B_max={b_max:g}"
        )


class EnergyConservationError(SeitError, ValueError):
    """Channel gains of a transmitter violate the L2-norm condition."""

    def __init__(self, transmitter, norm_sq):
        self.transmitter = transmitter
        self.norm_sq = norm_sq
        super().__init__(
            f"energy conservation violated by transmitter {transmitter}: "
            f"squared gain norm {norm_sq:g} > 1"
        )


class ConvergenceError(SeitError, RuntimeError):
    """Iterative solver hit its iteration cap; ``last_iterate`` holds its state."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class UnsupportedSizeError(SeitError, ValueError):
    pass


def binary_entropy(p):
    """Binary entropy in bits, with 0 log 0 = 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"binary entropy needs p in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def xlog2x(p):
    """Elementwise p*log2(p) with the 0*log(0) = 0 convention."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)


def _frozen_array(values, ndim=None):
    arr = np.array(values, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _check_probabilities(arr, axis, what):
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} contains non-finite entries")
    if np.any(arr < 0) or np.any(arr > 1):
        raise DomainError(f"{what} entries must lie in [0, 1]")
    sums = arr.sum(axis=axis)
    if np.any(np.abs(sums - 1.0) > PROB_TOL):
        raise DomainError(f"{what} must sum to 1 (got sums {np.ravel(sums)})")


@dataclass(frozen=True, eq=False)
class DiscreteEhChannel:
    """Finite-alphabet channel with a receiver output Y and a harvester output S.

    ``law[x, y, s]`` is P(y, s | x) and ``energy[s]`` is the harvested energy
    omega(s) of harvester symbol s.
    """

    law: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        law = _frozen_array(self.law, ndim=3)
        energy = _frozen_array(self.energy, ndim=1)
        if min(law.shape) < 1:
            raise ShapeError("alphabets must be non-empty")
        if energy.shape[0] != law.shape[2]:
            raise ShapeError(
                f"energy has {energy.shape[0]} entries but |S|={law.shape[2]}"
            )
        _check_probabilities(law.reshape(law.shape[0], -1), 1, "channel law row")
        if not np.all(np.isfinite(energy)) or np.any(energy < 0):
            raise DomainError("energy function values must be finite and >= 0")
        object.__setattr__(self, "law", law)
        object.__setattr__(self, "energy", energy)

    @classmethod
    def from_matrix(cls, matrix, receiver_output_size, harvester_output_size, energy):
        """Build from rows over the joint (y, s) alphabet, y-major order."""
        matrix = np.asarray(matrix, dtype=float)
        nx = matrix.shape[0]
        expected = receiver_output_size * harvester_output_size
        if matrix.ndim != 2 or matrix.shape[1] != expected:
            raise ShapeError(
                f"law matrix must have shape ({nx}, {expected}), got {matrix.shape}"
            )
        return cls(matrix.reshape(nx, receiver_output_size, harvester_output_size), energy)

    @classmethod
    def colocated(cls, p_y_given_x, energy=None):
        """Channel whose harvester sees the receiver output (S = Y).

        With ``energy`` omitted, omega(s) = s, i.e. symbol k carries k units.
        """
        w = np.asarray(p_y_given_x, dtype=float)
        if w.ndim != 2:
            raise ShapeError("p_y_given_x must be a matrix")
        ny = w.shape[1]
        law = w[:, :, None] * np.eye(ny)[None, :, :]
        if energy is None:
            energy = np.arange(ny, dtype=float)
        return cls(law, energy)

    @property
    def input_size(self):
        return self.law.shape[0]

    @property
    def receiver_output_size(self):
        return self.law.shape[1]

    @property
    def harvester_output_size(self):
        return self.law.shape[2]

    @property
    def law_matrix(self):
        return self.law.reshape(self.input_size, -1)

    @property
    def p_y_given_x(self):
        return self.law.sum(axis=2)

    @property
    def p_s_given_x(self):
        return self.law.sum(axis=1)

    @property
    def energy_per_input(self):
        """E[omega(S) | X = x] for every input symbol."""
        return self.p_s_given_x @ self.energy

    def restrict(self, inputs):
        """Sub-channel keeping only the listed input symbols."""
        return DiscreteEhChannel(self.law[list(inputs)], self.energy)


def noiseless_binary():
    return DiscreteEhChannel.colocated(np.eye(2))


def bsc(p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"crossover probability must be in [0, 1], got {p}")
    return DiscreteEhChannel.colocated([[1 - p, p], [p, 1 - p]])


def z_channel(eps):
    """Binary Z-channel: input 1 flips to output 0 with probability ``eps``."""
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"crossover probability must be in [0, 1], got {eps}")
    return DiscreteEhChannel.colocated([[1.0, 0.0], [eps, 1 - eps]])


@dataclass(frozen=True, eq=False)
class InputDistribution:
    probs: np.ndarray

    def __post_init__(self):
        probs = _frozen_array(self.probs, ndim=1)
        _check_probabilities(probs, 0, "input distribution")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, size):
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, size, index):
        probs = np.zeros(size)
        probs[index] = 1.0
        return cls(probs)

    def __len__(self):
        return self.probs.shape[0]


@dataclass(frozen=True)
class GmacConfig:
    """Two-user Gaussian MAC with an energy harvester, as four linear SNRs.

    ``snrJI`` is the SNR from transmitter I at node J (1 = receiver,
    2 = energy harvester).
    """

    snr11: float
    snr12: float
    snr21: float
    snr22: float

    def __post_init__(self):
        for name in ("snr11", "snr12", "snr21", "snr22"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_gains(cls, h11, h12, h21, h22, p1, p2):
        return validate_gmac(h11, h12, h21, h22, p1, p2)

    @classmethod
    def from_db(cls, snr11, snr12, snr21, snr22):
        return cls(*(10.0 ** (float(v) / 10.0) for v in (snr11, snr12, snr21, snr22)))

    @classmethod
    def symmetric(cls, snr):
        return cls(snr, snr, snr, snr)

    def as_tuple(self):
        return (self.snr11, self.snr12, self.snr21, self.snr22)


def validate_gmac(h11, h12, h21, h22, p1, p2):
    """SNRs from channel gains and powers, enforcing ||h_j||^2 <= 1 per transmitter.

    ``h_j = (h_1j, h_2j)`` collects the gains of transmitter j towards the
    receiver and towards the harvester.
    """
    values = (h11, h12, h21, h22, p1, p2)
    if not all(math.isfinite(float(v)) for v in values):
        raise DomainError("gains and powers must be finite")
    if p1 < 0 or p2 < 0:
        raise DomainError("transmit powers must be non-negative")
    for j, (h_rx, h_eh) in enumerate(((h11, h21), (h12, h22)), start=1):
        norm_sq = float(h_rx) ** 2 + float(h_eh) ** 2
        if norm_sq > 1.0 + NORM_TOL:
            raise EnergyConservationError(j, norm_sq)
    return GmacConfig(h11**2 * p1, h12**2 * p2, h21**2 * p1, h22**2 * p2)


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of each transmitter's power that carry information."""

    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("beta1", "beta2"):
            value = float(getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
            object.__setattr__(self, name, value)

    def __iter__(self):
        yield self.beta1
        yield self.beta2


@dataclass(frozen=True)
class RateTriplet:
    r1: float
    r2: float
    b: float

    def __post_init__(self):
        for name in ("r1", "r2", "b"):
            value = float(getattr(self, name))
            if not value >= 0 or not math.isfinite(value):
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class EnergyBudget:
    b_min: float
    b_max_feasible: float = field(default=math.inf)

    def __post_init__(self):
        if not self.b_min >= 0:
            raise DomainError(f"energy rate must be >= 0, got {self.b_min!r}")
        if self.b_min > self.b_max_feasible:
            raise InfeasibleEnergyError(self.b_min, self.b_max_feasible)


def require_feasible(b, b_max, what="channel", tol=1e-12):
    """Validate an energy floor and snap it onto ``b_max`` when within ``tol``.

    Returns the (possibly snapped) floor. Raises InfeasibleEnergyError above
    ``b_max + tol*max(1, b_max)``.
    """
    b = float(b)
    if math.isnan(b) or b < 0:
        raise DomainError(f"energy rate must be >= 0, got {b!r}")
    slack = tol * max(1.0, b_max)
    if b > b_max + slack:
        raise InfeasibleEnergyError(b, b_max, what)
    b = min(b, b_max)
    EnergyBudget(b, b_max)
    return b
