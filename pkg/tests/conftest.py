import numpy as np
import pytest

from bvd.spectral import Grid


@pytest.fixture(scope="session")
def grid64():
    return Grid(64, 64)


@pytest.fixture(scope="session")
def grid128():
    return Grid(128, 128)


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
