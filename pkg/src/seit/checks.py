"""Deterministic self-checks run by ``seit check``.

Each check returns ``(passed, detail)``. Stochastic checks (Monte Carlo) and
the slow randomized oracle comparisons live in the test suite only.
"""

from __future__ import annotations

import math

import numpy as np

from . import dmc, gaussian, gmac_game as game, gmac_region as region
from .core import GmacConfig, PowerSplit, bsc, noiseless_binary, z_channel


def _closed_form_channels():
    yield "noiseless", noiseless_binary(), dmc.closed_form_noiseless_binary
    for p in (0.05, 0.1, 0.25):
        yield f"bsc({p})", bsc(p), lambda b, p=p: dmc.closed_form_bsc(p, b)
    for eps in (0.1, 0.5):
        yield f"z({eps})", z_channel(eps), lambda b, eps=eps: dmc.closed_form_z_channel(eps, b)


def closed_form_fidelity():
    worst = 0.0
    for _, channel, closed in _closed_form_channels():
        grid = np.linspace(0.0, dmc.max_feasible_energy(channel), 50)
        for b in grid:
            worst = max(worst, abs(dmc.capacity_energy_function(channel, b).capacity - closed(b)))
    pi_err = max(
        abs(dmc.capacity_energy_function(z_channel(eps), 0.0).optimal_input.probs[1] - dmc.z_channel_optimal_input(eps))
        for eps in (0.1, 0.5)
    )
    return worst <= 1e-4 and pi_err <= 1e-3, f"max |solver - closed form| = {worst:.2e} bits, pi* error {pi_err:.2e}"


def gaussian_constancy():
    rng = np.random.default_rng(7)
    for _ in range(100):
        cfg = gaussian.GaussianP2pConfig(*rng.uniform(0, 100, 2))
        expected = 0.5 * math.log2(1 + cfg.snr1)
        values = {gaussian.p2p_info_energy_capacity(cfg, b) for b in np.linspace(0, gaussian.p2p_max_energy(cfg), 25)}
        if values != {expected}:
            return False, f"capacity varies with b for {cfg}"
    return True, "capacity constant in b for 100 configs"


def region_spot_values():
    cfg = GmacConfig.symmetric(10.0)
    s21 = region.sum_rate_at_energy(cfg, 21)[0]
    s36 = region.sum_rate_at_energy(cfg, 36)[0]
    ok = abs(s21 - 2.196159) <= 1e-9 and abs(s36 - 2.0) <= 1e-6
    return ok, f"sum rate at b=21: {s21:.9f} (want 2.196159), at b=36: {s36:.9f} (want 2.0)"


def ne_spot_values():
    cfg = GmacConfig.symmetric(10.0)
    sud10 = game.sud_ne_set(cfg, 10)[0].rates
    sic10 = game.sic_ne_set(cfg, 10, game.Decoder.SIC_1_BEFORE_2)[0].rates
    sym = PowerSplit(0.25, 0.25)
    sud36 = game.decoder_rates(cfg, sym, game.Decoder.SUD)
    sic36 = game.decoder_rates(cfg, sym, game.Decoder.SIC_1_BEFORE_2)
    top = game.sud_ne_set(cfg, 41)[0].rates
    got = [(sud10.r1, sud10.r2), (sic10.r1, sic10.r2), sud36, sic36, (top.r1, top.r2)]
    want = [(0.466432, 0.466432), (0.466432, 1.729716), (0.388804, 0.388804), (0.388804, 0.903677), (0.0, 0.0)]
    errors = [max(abs(g[0] - w[0]), abs(g[1] - w[1])) for g, w in zip(got, want)]
    return max(errors) <= 1e-6, "errors vs stated spot values: " + ", ".join(f"{e:.1e}" for e in errors)


def ne_certification():
    cfg = GmacConfig.symmetric(10.0)
    eta = game.rate_lipschitz(cfg) * 0.01
    checked = 0
    for b in (10, 21, 36, 41):
        for decoder in game.Decoder:
            g = game.GameConfig(cfg, b, decoder, eta)
            for point in game._ne_points(cfg, b, decoder, 21):
                if not game.is_eta_ne(g, point.split, 0.01):
                    return False, f"{decoder.value} point {point.split} at b={b} not certified"
                if not region.region_contains(cfg, b, point.rates):
                    return False, f"{decoder.value} point {point.split} at b={b} outside capacity region"
                checked += 1
    return True, f"{checked} NE points certified with eta={eta:.4f} and inside the capacity region"


def nash_region_nonempty():
    cfg = GmacConfig.symmetric(10.0)
    for b in np.linspace(0, region.mac_max_feasible_energy(cfg), 41):
        if not game.ne_region_union(cfg, b, 11).hull:
            return False, f"empty NE region at b={b}"
    return True, "NE region non-empty on 41 feasible floors"


CHECKS = [
    ("closed-form fidelity", closed_form_fidelity),
    ("gaussian no-trade-off", gaussian_constancy),
    ("region sum-rate spot values", region_spot_values),
    ("NE spot values", ne_spot_values),
    ("NE certification", ne_certification),
    ("NE region non-empty", nash_region_nonempty),
]


def run_checks(out=print):
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
