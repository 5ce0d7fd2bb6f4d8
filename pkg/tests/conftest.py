import numpy as np
import pytest

from fracwiener import SeedSpec, TimeGrid, brownian_path

DEFAULT_DT = 2.0**-8
DEFAULT_MU0 = 30.0


@pytest.fixture
def grid():
    return TimeGrid.from_dt(DEFAULT_DT, 256)


@pytest.fixture
def path(grid):
    return brownian_path(SeedSpec(20240611, 3), grid)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
