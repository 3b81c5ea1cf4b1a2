import numpy as np
import pytest

from approxop import SequencePoint


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def half_half():
    """The point (0.5, 0.5, 0, 0, ...)."""
    return SequencePoint.from_head([0.5, 0.5])


def random_gamma_point(rng, m, geometric=False):
    head = rng.uniform(0.0, 1.0, size=m)
    if geometric:
        return SequencePoint.geometric(head, float(rng.uniform(0, 1)), float(rng.uniform(0.0, 0.9)))
    return SequencePoint.from_head(head)
