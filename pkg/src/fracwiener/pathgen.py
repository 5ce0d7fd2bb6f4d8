"""Seedable Brownian path generation.

Every path owns its own Philox stream keyed by ``(master_seed, path_index)``
through :class:`numpy.random.SeedSequence`, so an ensemble is the same no
matter how paths are distributed over workers. Normal variates come from
numpy's ziggurat sampler (``Generator.standard_normal``); that choice is
fixed for this release.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .types import BrownianPath, TimeGrid, cumulative_sum

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    path_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) <= MAX_SEED:
            raise ValueError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if int(self.path_index) < 0:
            raise ValueError(f"path_index must be non-negative, got {self.path_index}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.path_index),))
        return np.random.Generator(np.random.Philox(ss))


Sampler = Callable[[SeedSpec, TimeGrid], np.ndarray]


def gaussian_increments(seed: SeedSpec, grid: TimeGrid) -> np.ndarray:
    """``grid.steps`` i.i.d. Normal(0, dt) draws for one path."""
    return np.sqrt(grid.dt) * seed.generator().standard_normal(grid.steps)


def zero_increments(seed: SeedSpec, grid: TimeGrid) -> np.ndarray:
    """Degenerate noise source; every increment is exactly zero."""
    return np.zeros(grid.steps)


def path_from_increments(dw, grid: TimeGrid) -> BrownianPath:
    return BrownianPath(grid, cumulative_sum(np.asarray(dw, dtype=np.float64)))


def brownian_path(seed: SeedSpec, grid: TimeGrid, sampler: Sampler = gaussian_increments) -> BrownianPath:
    """Cumulative sum of the increments drawn for ``seed``."""
    return path_from_increments(sampler(seed, grid), grid)


def increment_block(master_seed: int, start: int, stop: int, grid: TimeGrid,
                    sampler: Sampler = gaussian_increments) -> np.ndarray:
    """Increments for paths ``start .. stop-1`` stacked into shape ``(stop - start, N)``."""
    out = np.empty((stop - start, grid.steps))
    for row, m in enumerate(range(start, stop)):
        out[row] = sampler(SeedSpec(master_seed, m), grid)
    return out
