"""Information-energy capacity function C(b) of a discrete memoryless channel.

C(b) is the largest I(X;Y) over single-letter inputs whose expected harvested
energy is at least b. The solver is a Blahut-Arimoto iteration on the
Lagrangian I(X;Y) + lam * E[omega(S)] with the multiplier found by bracketed
bisection. Closed forms for three binary channels and a brute-force simplex
search serve as independent checks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ConvergenceError,
    DiscreteEhChannel,
    DomainError,
    InfeasibleEnergyError,
    InputDistribution,
    ShapeError,
    UnsupportedSizeError,
    binary_entropy,
    require_feasible,
    xlog2x,
)

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SolverSettings:
    """Knobs of the constrained Blahut-Arimoto solver.

    ``ba_tolerance`` bounds the duality gap of each inner run, in bits.
    ``lambda_bracket`` is the initial multiplier bracket; its upper end is
    doubled until it straddles the requested energy.
    """

    ba_tolerance: float = 1e-10
    ba_max_iterations: int = 10_000
    lambda_bracket: tuple = (0.0, 50.0)
    bisection_tolerance: float = 1e-9
    max_bisection_steps: int = 200

    def __post_init__(self):
        if not (self.ba_tolerance > 0 and self.bisection_tolerance > 0):
            raise DomainError("tolerances must be > 0")
        if self.ba_max_iterations < 1:
            raise DomainError("ba_max_iterations must be >= 1")
        lo, hi = self.lambda_bracket
        if not 0 <= lo < hi:
            raise DomainError("lambda_bracket must satisfy 0 <= lo < hi")


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True)
class CapacityEnergyPoint:
    """One point of C(b).

    ``optimal_input`` is *an* optimizer (the one reached from the uniform
    start); ``lagrange_multiplier`` is in nats per energy unit, so the slope
    of C at b is -lagrange_multiplier / ln 2 bits per energy unit.
    """

    b: float
    capacity: float
    optimal_input: InputDistribution
    lagrange_multiplier: float
    converged: bool = True
    energy: float = float("nan")


def _probs(channel, input):
    probs = input.probs if isinstance(input, InputDistribution) else np.asarray(input, float)
    if probs.shape != (channel.input_size,):
        raise ShapeError(
            f"input has {probs.shape[0] if probs.ndim else 0} entries, "
            f"channel has |X|={channel.input_size}"
        )
    return probs


def _mi_from_matrix(p, w):
    q = p @ w
    return float(np.sum(p * np.sum(xlog2x(w), axis=1)) - np.sum(xlog2x(q)))


def mutual_information(channel: DiscreteEhChannel, input) -> float:
    """I(X;Y) in bits under ``channel``'s receiver marginal P(y|x)."""
    p = _probs(channel, input)
    return max(0.0, _mi_from_matrix(p, channel.p_y_given_x))


def expected_energy(channel: DiscreteEhChannel, input) -> float:
    """Expected harvested energy per channel use, sum_x P(x) E[omega(S)|x]."""
    return float(_probs(channel, input) @ channel.energy_per_input)


def max_feasible_energy(channel: DiscreteEhChannel) -> float:
    return float(np.max(channel.energy_per_input))


def _newton_polish(w_live, fixed, log_p, value, scores, sweeps=20):
    # Newton steps on the Lagrangian over the current support, for the
    # ill-conditioned cases (nearly dependent rows of W) where first-order
    # steps crawl. A step is kept only if it raises the Lagrangian.
    p = np.exp(log_p)
    for _ in range(sweeps):
        live = p > 1e-12 * p.max()
        wa = w_live[live]
        q = p @ w_live
        grad = fixed[live] - wa @ np.log(q)
        hess = -(wa / q) @ wa.T
        k = wa.shape[0]
        kkt = np.zeros((k + 1, k + 1))
        kkt[:k, :k] = hess
        kkt[:k, k] = kkt[k, :k] = 1.0
        rhs = np.concatenate([-grad, [0.0]])
        d = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
        pa = p[live]
        neg = d < 0
        alpha = min(1.0, 0.999 * float(np.min(-pa[neg] / d[neg]))) if neg.any() else 1.0
        improved = False
        while alpha > 1e-12:
            trial = p.copy()
            trial[live] = np.maximum(pa + alpha * d, 0.0)
            trial = np.maximum(trial / trial.sum(), 1e-300)
            lt = np.log(trial)
            c_new, v_new = scores(lt)
            if v_new > value:
                p, log_p, value, improved = trial, lt, v_new, True
                break
            alpha *= 0.5
        if not improved:
            break
    return log_p


def _ba_log(w, bonus, log_p, tol, max_iter):
    # Iterates on log-probabilities so that no input ever underflows to an
    # exact zero (BA can never recover from one). Step exponent mu = 1 is the
    # classical update; mu grows while the Lagrangian keeps increasing and
    # backtracks towards 1 on any decrease, which keeps the ascent monotone.
    with np.errstate(divide="ignore"):
        self_term = np.where(w > 0, w * np.log(np.where(w > 0, w, 1.0)), 0.0).sum(axis=1)
    fixed = self_term + bonus
    w_live = w[:, w.sum(axis=0) > 0]
    tol_nats = tol * LN2

    def scores(lp):
        p = np.exp(lp)
        c = fixed - w_live @ np.log(p @ w_live)
        return c, float(p @ c)

    c, value = scores(log_p)
    mu = 1.0
    gap = math.inf
    for it in range(1, max_iter + 1):
        # max_x c(x) bounds the optimal Lagrangian from above, p.c is attained
        gap = c.max() - value
        if gap <= tol_nats:
            return log_p, it
        while True:
            step = log_p + mu * c
            top = step.max()
            step -= top + math.log(np.exp(step - top).sum())
            c_new, value_new = scores(step)
            if value_new >= value or mu == 1.0:
                break
            mu = max(1.0, 0.25 * mu)
        log_p, c, value = step, c_new, value_new
        mu = min(mu * 2.0, 1e6)
        if it % 100 == 0:
            log_p = _newton_polish(w_live, fixed, log_p, value, scores)
            c, value = scores(log_p)
    raise ConvergenceError(
        f"Blahut-Arimoto did not reach gap {tol:g} bits in {max_iter} iterations "
        f"(gap {gap / LN2:.3g} bits)",
        last_iterate=np.exp(log_p),
    )


def blahut_arimoto(w, reward=None, lam=0.0, init=None, tol=1e-10, max_iter=10_000):
    """Blahut-Arimoto iteration maximizing I(X;Y) + lam * sum_x P(x) reward[x].

    The multiplier enters as a per-input weight exp(lam * reward[x]); the
    iteration stops when the duality gap (upper minus lower bound on the
    optimal Lagrangian) drops below ``tol`` bits. ``init`` is a strictly
    positive starting distribution (uniform by default). Returns
    ``(p, iterations)``. Raises ConvergenceError carrying the last iterate
    when ``max_iter`` is exhausted.
    """
    w = np.asarray(w, dtype=float)
    nx = w.shape[0]
    bonus = np.zeros(nx) if reward is None else lam * np.asarray(reward, dtype=float)
    log_p = np.full(nx, -math.log(nx)) if init is None else np.log(np.asarray(init, float))
    log_p, it = _ba_log(w, bonus, log_p, tol, max_iter)
    return np.exp(log_p), it


def _lagrangian_solve(w, e, lam, log_init, settings):
    log_p, _ = _ba_log(w, lam * e, log_init, settings.ba_tolerance, settings.ba_max_iterations)
    return log_p, float(np.exp(log_p) @ e)


def _point(channel, b, p, lam, settings):
    return CapacityEnergyPoint(
        b=b,
        capacity=mutual_information(channel, p),
        optimal_input=InputDistribution(p / p.sum()),
        lagrange_multiplier=lam,
        converged=True,
        energy=expected_energy(channel, p),
    )


def capacity_energy_function(
    channel: DiscreteEhChannel, b: float, settings: SolverSettings = DEFAULT_SETTINGS
) -> CapacityEnergyPoint:
    """C(b) for a DMC with energy harvester, with the achieving input."""
    b_max = max_feasible_energy(channel)
    b = require_feasible(b, b_max)
    w = channel.p_y_given_x
    e = channel.energy_per_input
    ba = dict(tol=settings.ba_tolerance, max_iter=settings.ba_max_iterations)

    p0, _ = blahut_arimoto(w, **ba)
    if p0 @ e >= b:
        return _point(channel, b, p0, 0.0, settings)

    if b >= b_max - settings.bisection_tolerance:
        # Multiplier diverges; optimize over the most energetic inputs only.
        support = np.flatnonzero(e >= b_max - settings.bisection_tolerance)
        sub, _ = blahut_arimoto(w[support], **ba)
        p = np.zeros(channel.input_size)
        p[support] = sub
        return _point(channel, b, p, math.inf, settings)

    lo, hi = settings.lambda_bracket
    log_uniform = np.full(channel.input_size, -math.log(channel.input_size))
    if lo == 0:
        lp_lo, e_lo = np.log(p0), float(p0 @ e)
    else:
        lp_lo, e_lo = _lagrangian_solve(w, e, lo, log_uniform, settings)
    lp_hi, e_hi = _lagrangian_solve(w, e, hi, lp_lo, settings)
    while e_hi < b:
        lo, lp_lo, e_lo = hi, lp_hi, e_hi
        hi *= 2.0
        if not math.isfinite(hi):
            raise ConvergenceError("multiplier bracket diverged", last_iterate=np.exp(lp_hi))
        lp_hi, e_hi = _lagrangian_solve(w, e, hi, lp_hi, settings)

    # Bracketed search on the multiplier: Illinois false-position steps,
    # with a plain bisection step whenever three steps fail to halve the bracket.
    tol = settings.bisection_tolerance
    f_lo, f_hi = e_lo - b, e_hi - b  # Illinois-weighted residuals
    side, count, checkpoint = 0, 0, hi - lo
    for _ in range(settings.max_bisection_steps):
        if e_hi - b <= tol:
            return _point(channel, b, np.exp(lp_hi), hi, settings)
        count += 1
        if count > 3 and hi - lo > 0.5 * checkpoint:
            mid = 0.5 * (lo + hi)
            count, checkpoint = 0, hi - lo
        else:
            mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
            if count > 3:
                count, checkpoint = 0, hi - lo
        if not lo < mid < hi:
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
        # log p(lam) is close to affine in lam, so interpolate the warm start
        t = (mid - lo) / (hi - lo)
        guess = (1.0 - t) * lp_lo + t * lp_hi
        guess -= np.log(np.exp(guess - guess.max()).sum()) + guess.max()
        lp_mid, e_mid = _lagrangian_solve(w, e, mid, guess, settings)
        if e_mid < b:
            lo, lp_lo, e_lo, f_lo = mid, lp_mid, e_mid, e_mid - b
            f_hi = 0.5 * f_hi if side == -1 else f_hi
            side = -1
        else:
            hi, lp_hi, e_hi, f_hi = mid, lp_mid, e_mid, e_mid - b
            f_lo = 0.5 * f_lo if side == 1 else f_lo
            side = 1

    # Energy jumps at this multiplier (non-unique Lagrangian maximizer): the
    # mixture of the two bracketing optimizers meets b and stays optimal.
    p_lo, p_hi = np.exp(lp_lo), np.exp(lp_hi)
    theta = (e_hi - b) / (e_hi - e_lo)
    p = theta * p_lo + (1.0 - theta) * p_hi
    if p @ e < b:
        p = p_hi
    return _point(channel, b, p, hi, settings)


def capacity_energy_curve(channel, b_values, settings=DEFAULT_SETTINGS):
    return [capacity_energy_function(channel, b, settings) for b in b_values]


def closed_form_noiseless_binary(b: float) -> float:
    if not 0.0 <= b <= 1.0:
        raise DomainError(f"b must lie in [0, 1] for the noiseless binary channel, got {b}")
    return 1.0 if b <= 0.5 else binary_entropy(b)


def closed_form_bsc(p: float, b: float) -> float:
    """C(b) of the binary symmetric channel with crossover ``p`` in [0, 1/2]."""
    if not 0.0 <= p <= 0.5:
        raise DomainError(f"crossover probability must lie in [0, 1/2], got {p}")
    b = require_feasible(b, 1.0 - p, "BSC")
    if b <= 0.5:
        return 1.0 - binary_entropy(p)
    return binary_entropy(b) - binary_entropy(p)


def z_channel_optimal_input(eps: float) -> float:
    """P(X=1) achieving the unconstrained capacity of the Z-channel."""
    _check_eps(eps)
    a = eps ** (eps / (1.0 - eps)) if eps > 0 else 1.0
    return a / (1.0 + (1.0 - eps) * a)


def z_channel_capacity(eps: float) -> float:
    """Unconstrained Z-channel capacity C(0) in bits."""
    _check_eps(eps)
    if eps == 0:
        return 1.0
    return math.log2(1.0 - eps ** (1.0 / (1.0 - eps)) + eps ** (eps / (1.0 - eps)))


def z_channel_threshold(eps: float) -> float:
    """Energy rate up to which the constraint is vacuous: (1 - eps) * pi*."""
    return (1.0 - eps) * z_channel_optimal_input(eps)


def _check_eps(eps):
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"Z-channel crossover must lie in [0, 1), got {eps}")


def closed_form_z_channel(eps: float, b: float) -> float:
    _check_eps(eps)
    b = require_feasible(b, 1.0 - eps, "Z-channel")
    if b <= z_channel_threshold(eps):
        return z_channel_capacity(eps)
    return binary_entropy(b) - b / (1.0 - eps) * binary_entropy(eps)


def _lattice(n, m):
    # All non-negative integer vectors of length n summing to m.
    for bars in itertools.combinations(range(m + n - 1), n - 1):
        prev = -1
        out = []
        for bar in bars:
            out.append(bar - prev - 1)
            prev = bar
        out.append(m + n - 2 - prev)
        yield out


def _simplex_candidates(n, steps, e, b):
    """Grid points of the simplex plus the exact crossings of E = b on grid edges.

    A lattice edge moves mass between two coordinates (i, j) with the others
    frozen at grid values; energy is linear along it.
    """
    h = 1.0 / steps
    pts = np.array(list(_lattice(n, steps)), dtype=float) * h
    chunks = [pts]
    if n == 1:
        return pts
    for i, j in itertools.combinations(range(n), 2):
        others = [k for k in range(n) if k not in (i, j)]
        if others:
            frozen = np.array(
                [v for v in itertools.product(range(steps + 1), repeat=len(others)) if sum(v) <= steps],
                dtype=float,
            ) * h
        else:
            frozen = np.zeros((1, 0))
        rest = 1.0 - frozen.sum(axis=1)
        base = frozen @ e[others] if others else np.zeros(len(frozen))
        # energy = base + t*e_i + (rest - t)*e_j for t in [0, rest]
        de = e[i] - e[j]
        if de == 0:
            continue
        t = (b - base - rest * e[j]) / de
        ok = (t >= 0) & (t <= rest)
        if not np.any(ok):
            continue
        cand = np.zeros((int(ok.sum()), n))
        cand[:, i] = t[ok]
        cand[:, j] = rest[ok] - t[ok]
        if others:
            cand[:, others] = frozen[ok]
        chunks.append(np.clip(cand, 0.0, 1.0))
    return np.vstack(chunks)


def simplex_oracle(channel: DiscreteEhChannel, b: float, grid_step: float = 1e-3) -> float:
    """Brute-force lower bound on C(b) by exhaustive search over the simplex.

    Evaluates I(X;Y) on every grid point of the input simplex at resolution
    ``grid_step`` and at every point where the constraint hyperplane
    E[omega(S)] = b crosses a grid edge, keeping only points meeting the
    energy floor. Independent of the Blahut-Arimoto path it is used to check.
    """
    n = channel.input_size
    if n > 4:
        raise UnsupportedSizeError(f"simplex oracle supports |X| <= 4, got {n}")
    if not 0 < grid_step <= 0.1:
        raise DomainError(f"grid_step must lie in (0, 0.1], got {grid_step}")
    e = channel.energy_per_input
    b_max = float(e.max())
    b = require_feasible(b, b_max)
    steps = int(round(1.0 / grid_step))
    pts = _simplex_candidates(n, steps, e, b)
    energy = pts @ e
    pts = pts[energy >= b - 1e-12 * max(1.0, b_max)]
    if len(pts) == 0:
        # only vertices of maximal energy can remain; they are on the grid
        raise InfeasibleEnergyError(b, b_max)
    w = channel.p_y_given_x
    cond = np.sum(xlog2x(w), axis=1)
    best = -math.inf
    for start in range(0, len(pts), 200_000):
        chunk = pts[start:start + 200_000]
        q = chunk @ w
        mi = chunk @ cond - np.sum(xlog2x(q), axis=1)
        best = max(best, float(mi.max()))
    return max(best, 0.0)


def mi_continuity_slack(channel, grid_step):
    """Upper bound on |I(p) - I(p')| when p, p' are one grid step apart.

    MI is not Lipschitz at the simplex boundary, so this uses the entropy
    continuity bound: with total-variation distance d <= (|X|-1)*step,
    |I(p) - I(p')| <= 2 d log2|Y| + H2(d).
    """
    d = min(0.5, (channel.input_size - 1) * grid_step)
    ny = max(channel.receiver_output_size, 2)
    return 2.0 * d * math.log2(ny) + binary_entropy(d)
