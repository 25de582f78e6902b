import numpy as np
import pytest

from dctfuse import synthetic_reference


@pytest.fixture
def rng():
    return np.random.default_rng(0xDC7F)


@pytest.fixture(scope="session")
def textured_image():
    """A 128x128 natural-content image where every block has detail."""
    return synthetic_reference(11, 128)


def random_block(rng, lo=0, hi=256):
    return rng.integers(lo, hi, (8, 8)).astype(np.float64)
