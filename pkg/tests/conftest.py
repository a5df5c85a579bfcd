import pytest
import numpy as np
from hypothesis import HealthCheck, settings

from combforge import IntervalUnion

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


@pytest.fixture
def two_bands():
    return IntervalUnion(((-1.0, -0.5), (0.5, 1.0)))


@pytest.fixture
def unit():
    return IntervalUnion(((-1.0, 1.0),))
