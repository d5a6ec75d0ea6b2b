import numpy as np
import pytest

from qent import channels, states


def random_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g + g.conj().T


@pytest.fixture
def bell():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return np.outer(v, v)


@pytest.fixture
def qubit_mixed():
    return states.maximally_mixed(2)


@pytest.fixture
def identity2():
    return channels.identity_channel(2)
