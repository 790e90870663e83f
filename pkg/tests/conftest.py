import numpy as np
import pytest

from framelab import Frame

ROOT3 = np.sqrt(3.0)


@pytest.fixture
def mb():
    """The three unit vectors at mutual 120 degrees in the plane."""
    return Frame(np.array([
        [0.0, 1.0],
        [-ROOT3 / 2.0, -0.5],
        [ROOT3 / 2.0, -0.5],
    ]))


def random_frame(seed, d, n):
    rng = np.random.default_rng(seed)
    return Frame(rng.standard_normal((n, d)))
