import math

import numpy as np
import pytest

from zising.region import Region, regular_region


@pytest.fixture
def square():
    return regular_region(2)


@pytest.fixture
def hexagon():
    return regular_region(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def asym_square(theta):
    """n = 2 crossing region with alpha = (0, theta, pi/2, theta + pi/2)."""
    return Region.from_lists([3, 4, 1, 2], [0.0, theta, 0.5 * math.pi, theta + 0.5 * math.pi])


def alternating_example():
    q = 0.25 * math.pi
    return Region.from_lists([3, 4, 1, 2, 6, 5], [0.0, q, 2 * q, 3 * q, 0.0, 2 * q])


def square_m12(m):
    kp = math.sqrt(1.0 - m)
    return 1.0 / (math.sqrt(kp) + math.sqrt(1.0 + kp))
