import numpy as np
import pytest

from qshock.gaussian_packet import PacketParams


@pytest.fixture
def unit():
    """hbar = m = sigma0 = 1, u0 = 10."""
    return PacketParams(hbar=1.0, m=1.0, sigma0=1.0, u0=10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
