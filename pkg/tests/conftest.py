import numpy as np
import pytest

from gaussmem.models.channel import ChannelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def attenuator():
    """Below-threshold attenuator with a critical temperature near 0.8 at E = 8"""
    return ChannelParams(kappa=0.9, mu=0.8)


@pytest.fixture
def amplifier():
    """Below-threshold amplifier (mu*kappa = 0.88)"""
    return ChannelParams(kappa=1.1, mu=0.8)


@pytest.fixture
def above_threshold():
    return ChannelParams(kappa=4.0, mu=0.5)
