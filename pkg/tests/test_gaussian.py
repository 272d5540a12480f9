import math

import pytest
from hypothesis import given, strategies as st

from seit.core import DomainError, InfeasibleEnergyError
from seit.gaussian import GaussianP2pConfig, p2p_info_energy_capacity, p2p_max_energy


def test_values():
    cfg = GaussianP2pConfig(10, 10)
    assert p2p_max_energy(cfg) == 11.0
    assert p2p_info_energy_capacity(cfg, 5.0) == 0.5 * math.log2(11)


@given(st.floats(0, 1e4), st.floats(0, 1e4), st.floats(0, 1))
def test_no_trade_off(snr1, snr2, frac):
    cfg = GaussianP2pConfig(snr1, snr2)
    b = frac * p2p_max_energy(cfg)
    assert p2p_info_energy_capacity(cfg, b) == p2p_info_energy_capacity(cfg, 0.0)


def test_from_gains():
    cfg = GaussianP2pConfig.from_gains(0.6, 0.8, 10)
    assert (cfg.snr1, cfg.snr2) == pytest.approx((3.6, 6.4))
    with pytest.raises(ValueError):
        GaussianP2pConfig.from_gains(0.9, 0.9, 1)


def test_errors():
    with pytest.raises(DomainError):
        GaussianP2pConfig(-1, 0)
    with pytest.raises(InfeasibleEnergyError):
        p2p_info_energy_capacity(GaussianP2pConfig(1, 1), 3)
