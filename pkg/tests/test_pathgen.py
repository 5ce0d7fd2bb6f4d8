import random

import numpy as np
import pytest

from fracwiener import SeedSpec, TimeGrid, brownian_path, gaussian_increments, increments, path_from_increments
from fracwiener.pathgen import increment_block, zero_increments


def test_determinism(grid):
    a = gaussian_increments(SeedSpec(42, 7), grid)
    b = gaussian_increments(SeedSpec(42, 7), grid)
    assert a.tobytes() == b.tobytes()
    c = gaussian_increments(SeedSpec(42, 8), grid)
    assert not np.array_equal(a, c)


def test_seed_validation():
    with pytest.raises(ValueError):
        SeedSpec(-1, 0)
    with pytest.raises(ValueError):
        SeedSpec(2**64, 0)
    with pytest.raises(ValueError):
        SeedSpec(0, -3)
    SeedSpec(2**64 - 1, 0)


def test_increment_variance_against_second_generator():
    grid = TimeGrid.from_dt(2**-8, 10**6)
    dw = gaussian_increments(SeedSpec(1, 0), grid)
    assert abs(dw.var() / grid.dt - 1) < 0.01
    assert abs(dw.mean()) < 4 * np.sqrt(grid.dt / dw.size)
    # independent generator (Mersenne Twister, Box-Muller family) as oracle
    gen = random.Random(99)
    ref = np.array([gen.gauss(0.0, np.sqrt(grid.dt)) for _ in range(200_000)])
    assert abs(ref.var() / grid.dt - 1) < 0.01
    assert abs(dw.var() / ref.var() - 1) < 0.02


def test_path_is_cumsum_of_increments(grid):
    assert np.array_equal(path_from_increments([0.1, -0.15], TimeGrid(1.0, 2)).values, [0.1, 0.1 - 0.15])
    p = brownian_path(SeedSpec(5, 0), grid, zero_increments)
    assert np.all(p.values == 0)
    seed = SeedSpec(5, 1)
    w = brownian_path(seed, grid)
    assert np.allclose(increments(w), gaussian_increments(seed, grid), rtol=0, atol=1e-15)


def test_terminal_variance():
    grid = TimeGrid(1.0, 256)
    wT = increment_block(11, 0, 10_000, grid).sum(axis=1)
    assert abs(np.mean(wT**2) - 1.0) < 0.05


def test_independence_between_path_indices():
    grid = TimeGrid.from_dt(2**-8, 2**16)
    a = gaussian_increments(SeedSpec(3, 0), grid)
    for j in (1, 2, 1000):
        b = gaussian_increments(SeedSpec(3, j), grid)
        assert abs(np.corrcoef(a, b)[0, 1]) < 4 / np.sqrt(grid.steps)


def test_ensemble_variance_scaling(grid):
    dw = increment_block(17, 0, 2000, grid)
    n = dw.size
    se = grid.dt * np.sqrt(2 / (n - 1))
    assert abs(dw.var(ddof=1) - grid.dt) < 3 * se


def test_block_matches_single_paths(grid):
    blk = increment_block(9, 10, 14, grid)
    for row, m in enumerate(range(10, 14)):
        assert blk[row].tobytes() == gaussian_increments(SeedSpec(9, m), grid).tobytes()
