"""Reference computations used by the tests.

Deliberately share nothing with the solver code: plain dense grids and
closed forms derived by hand.
"""

import math

import numpy as np


def h2(p):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return np.nan_to_num(out)


def mi_rows(p, w):
    """I(X;Y) in bits for each row of input distributions ``p`` (k, nx)."""
    p = np.atleast_2d(p)
    q = p @ w
    with np.errstate(divide="ignore", invalid="ignore"):
        hy = -np.sum(np.where(q > 0, q * np.log2(q), 0.0), axis=1)
        hw = -np.sum(np.where(w > 0, w * np.log2(w), 0.0), axis=1)
    return hy - p @ hw


def binary_input_capacity(w, e_per_input, b, n=400_001):
    """max I over P(X=1) on a dense 1-D grid with E >= b (2-input channels)."""
    t = np.linspace(0.0, 1.0, n)
    e0, e1 = e_per_input
    if e0 != e1:
        # the optimum often sits exactly on the energy boundary
        t = np.append(t, np.clip((b - e0) / (e1 - e0), 0.0, 1.0))
    p = np.stack([1 - t, t], axis=1)
    ok = p @ e_per_input >= b - 1e-12
    if not ok.any():
        return -math.inf
    return float(mi_rows(p[ok], w).max())


def bsc_capacity(p, b):
    # E = P(Y=1) = p + pi (1 - 2p); the best P(Y=1) is max(1/2, b)
    q = max(0.5, b)
    return float(h2(q) - h2(p))


def z_capacity(eps, b):
    # P(Y=1) = pi (1 - eps); I(pi) = H2(pi (1 - eps)) - pi H2(eps), concave in pi
    a = 1 - eps
    pi_star = 1.0 / (a * (1 + 2 ** (h2(eps) / a)))
    pi = max(pi_star, b / a)
    return float(h2(pi * a) - pi * h2(eps))


def noiseless_capacity(b):
    return 1.0 if b <= 0.5 else float(h2(b))


def mac_grid(cfg, n=1001):
    beta = np.linspace(0.0, 1.0, n)
    b1, b2 = np.meshgrid(beta, beta, indexing="ij")
    s11, s12, s21, s22 = cfg
    c1 = 0.5 * np.log2(1 + b1 * s11)
    c2 = 0.5 * np.log2(1 + b2 * s12)
    cs = 0.5 * np.log2(1 + b1 * s11 + b2 * s12)
    energy = 1 + s21 + s22 + 2 * np.sqrt((1 - b1) * s21 * (1 - b2) * s22)
    return c1.ravel(), c2.ravel(), cs.ravel(), energy.ravel()


def grid_best_energy(grid, r1, r2, slack=0.0):
    """Largest grid energy among splits supporting (r1 - slack, r2 - slack)."""
    c1, c2, cs, energy = grid
    r1, r2 = max(r1 - slack, 0.0), max(r2 - slack, 0.0)
    mask = (c1 >= r1) & (c2 >= r2) & (cs >= r1 + r2)
    return float(energy[mask].max()) if mask.any() else -math.inf
