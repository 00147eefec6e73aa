import numpy as np
import pytest

from polerec import DiskPairConfig


@pytest.fixture
def cfg():
    """The reference geometry used throughout: a=1, b=100, c=10."""
    return DiskPairConfig(1.0, 100.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240)
