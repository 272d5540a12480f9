import math

import numpy as np
import pytest

from seit import mc_sim
from seit.core import DomainError, EnergyConservationError, GmacConfig, PowerSplit

SYM = GmacConfig.symmetric(10.0)


def analytic(snr21, snr22, b1, b2):
    return 1 + snr21 + snr22 + 2 * math.sqrt((1 - b1) * snr21 * (1 - b2) * snr22)


def sim(beta, n=20_000, trials=40, seed=1, **kw):
    return mc_sim.SimConfig(SYM, PowerSplit(beta, beta), block_length=n, trials=trials, seed=seed, **kw)


@pytest.mark.parametrize("beta", [0.0, 0.25, 0.75, 1.0])
def test_unbiased(beta):
    report = mc_sim.simulate_blocks(sim(beta))
    assert report.analytic_energy_rate == pytest.approx(analytic(10, 10, beta, beta))
    assert abs(report.mean_energy_rate - report.analytic_energy_rate) <= 4 * report.standard_error


def test_per_trial_spread_scales_with_block_length():
    small = mc_sim.simulate_blocks(sim(0.25, n=5_000, trials=200, seed=5))
    large = mc_sim.simulate_blocks(sim(0.25, n=20_000, trials=200, seed=6))
    ratio = small.per_trial_std / large.per_trial_std
    assert 1.7 <= ratio <= 2.3
    # S is Gaussian, so Var(S^2) = 2 B^2
    assert large.per_trial_std == pytest.approx(math.sqrt(2) * 36 / math.sqrt(20_000), rel=0.2)


def test_cross_term_matches_correlation():
    report = mc_sim.simulate_blocks(sim(0.25))
    # 2 h21 h22 E[X1 X2] = 2 sqrt(SNR21 SNR22 (1-b1)(1-b2))
    expected = 2 * math.sqrt(10 * 10 * 0.75 * 0.75)
    assert abs(np.mean(report.cross_term_rate) - expected) <= 5 * np.std(report.cross_term_rate) / math.sqrt(40)
    independent = mc_sim.simulate_blocks(sim(1.0))
    assert abs(np.mean(independent.cross_term_rate)) < 0.2


def test_deterministic_under_seed_and_threads(monkeypatch):
    a = mc_sim.simulate_blocks(sim(0.5, n=3000, trials=8, seed=42))
    monkeypatch.setenv("SEIT_THREADS", "4")
    b = mc_sim.simulate_blocks(sim(0.5, n=3000, trials=8, seed=42))
    np.testing.assert_array_equal(a.empirical_energy_rate, b.empirical_energy_rate)
    c = mc_sim.simulate_blocks(sim(0.5, n=3000, trials=8, seed=43))
    assert not np.array_equal(a.empirical_energy_rate, c.empirical_energy_rate)


def test_trials_are_prefix_stable():
    # trial i depends only on (seed, i)
    few = mc_sim.simulate_blocks(sim(0.5, n=1000, trials=3))
    many = mc_sim.simulate_blocks(sim(0.5, n=1000, trials=6))
    np.testing.assert_array_equal(few.empirical_energy_rate, many.empirical_energy_rate[:3])


def test_block_length_chunking_consistent():
    # a block spanning several chunks still gives a sensible average
    report = mc_sim.simulate_blocks(sim(0.0, n=mc_sim.CHUNK * 2 + 17, trials=3))
    assert abs(report.mean_energy_rate - 41) < 1.0


def test_outage():
    s = sim(0.25, n=100_000, b_target=36.0)
    report = mc_sim.simulate_blocks(s)
    assert s.epsilon_slack == pytest.approx(0.36)
    assert report.outage_fraction <= 0.05
    curve = mc_sim.outage_curve(s, [30, 36, 40], report)
    fractions = [f for _, f in curve]
    assert fractions == sorted(fractions)
    assert fractions[0] == 0.0 and fractions[-1] == 1.0
    with pytest.raises(ValueError):
        mc_sim.outage_curve(s, [])


def test_gains_and_powers():
    s = mc_sim.SimConfig(
        SYM, PowerSplit(0.5, 0.5), block_length=5000, trials=20,
        gains=(0.6, 0.6, 0.8, 0.8), powers=(10.0, 10.0),
    )
    assert s.cfg.as_tuple() == pytest.approx((3.6, 3.6, 6.4, 6.4))
    report = mc_sim.simulate_blocks(s)
    assert abs(report.mean_energy_rate - analytic(6.4, 6.4, 0.5, 0.5)) <= 4 * report.standard_error
    with pytest.raises(EnergyConservationError):
        mc_sim.SimConfig(SYM, PowerSplit(0, 0), gains=(0.9, 0.6, 0.9, 0.8), powers=(1, 1))
    with pytest.raises(DomainError):
        mc_sim.SimConfig(SYM, PowerSplit(0, 0), gains=(0.6, 0.6, 0.8, 0.8))


def test_config_validation():
    with pytest.raises(DomainError):
        sim(0.5, n=0)
    with pytest.raises(DomainError):
        sim(0.5, epsilon_slack=-1.0)
    with pytest.raises(DomainError):
        sim(0.5, seed=-1)


def test_report_round_trip():
    report = mc_sim.simulate_blocks(sim(0.5, n=500, trials=4))
    back = mc_sim.SimReport.from_dict(report.to_dict())
    np.testing.assert_array_equal(back.empirical_energy_rate, report.empirical_energy_rate)
    assert back.analytic_energy_rate == report.analytic_energy_rate


def test_outage_curve_straddles_mean():
    s = mc_sim.SimConfig(SYM, PowerSplit(0.75, 0.75), block_length=100_000, trials=50, seed=0)
    fractions = [f for _, f in mc_sim.outage_curve(s, [24, 26, 28])]
    assert fractions[0] == 0.0 and fractions[2] == 1.0
    assert 0.3 < fractions[1] < 0.7
