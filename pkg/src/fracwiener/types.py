"""Value types shared by every scheme: time grids, paths, signs and Phi.

Complex scalars are plain Python/numpy ``complex128`` values. Path values
are stored in read-only numpy arrays so instances can be handed to worker
processes without defensive copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PHI_POS = 1.0 + 0.0j
PHI_NEG = 0.0 + 1.0j


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of ``steps`` intervals covering ``[0, t_max]``."""

    t_max: float
    steps: int

    def __post_init__(self):
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"t_max must be a positive finite number, got {self.t_max!r}")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "t_max", float(self.t_max))

    @classmethod
    def from_dt(cls, dt: float, steps: int) -> "TimeGrid":
        if not (math.isfinite(dt) and dt > 0):
            raise ValueError(f"dt must be a positive finite number, got {dt!r}")
        return cls(t_max=dt * steps, steps=steps)

    @property
    def dt(self) -> float:
        return self.t_max / self.steps

    @property
    def times(self) -> np.ndarray:
        """Right end point ``t_i = (i + 1) dt`` of each step."""
        return self.dt * np.arange(1, self.steps + 1)


@dataclass(frozen=True, eq=False)
class BrownianPath:
    """Real path ``W_0 .. W_{N-1}``; the level before index 0 is taken as 0."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values, np.float64)
        if vals.ndim != 1 or vals.shape[0] != self.grid.steps:
            raise ValueError(
                f"path has shape {vals.shape}, expected ({self.grid.steps},)"
            )
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def increments(self) -> np.ndarray:
        return increments(self)


@dataclass(frozen=True, eq=False)
class ComplexPath:
    """Complex path ``X_0 .. X_{N-1}`` produced by a fractional-power scheme."""

    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values, np.complex128)
        if vals.ndim != 1 or vals.shape[0] != self.grid.steps:
            raise ValueError(
                f"path has shape {vals.shape}, expected ({self.grid.steps},)"
            )
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def increments(self) -> np.ndarray:
        return increments(self)


@dataclass(frozen=True, eq=False)
class SignSequence:
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values, np.int8)
        if vals.ndim != 1 or not np.all((vals == 1) | (vals == -1)):
            raise ValueError("sign sequence must hold only +1 and -1")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class PhiSequence:
    """Per-step Bernoulli factor, each entry exactly ``1`` or ``1j``."""

    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values, np.complex128)
        if vals.ndim != 1 or not np.all((vals == PHI_POS) | (vals == PHI_NEG)):
            raise ValueError("Phi sequence must hold only 1 and 1j")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    @classmethod
    def from_signs(cls, s: SignSequence | np.ndarray) -> "PhiSequence":
        s = s.values if isinstance(s, SignSequence) else np.asarray(s)
        return cls(np.where(s > 0, PHI_POS, PHI_NEG))

    def signs(self) -> SignSequence:
        """Read the sign process back off Phi (``Phi**2 == sign``)."""
        return SignSequence(np.where(self.values == PHI_POS, 1, -1))


def sign_of(x: float) -> int:
    """Sign of a finite real with ``sign_of(0) == +1``."""
    if not math.isfinite(x):
        raise ValueError(f"sign_of requires a finite value, got {x!r}")
    return -1 if x < 0 else 1


def signs(x) -> np.ndarray:
    """Vectorized :func:`sign_of`, returned as float64 ``+1.0`` / ``-1.0``."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("signs requires finite values")
    return np.where(x < 0, -1.0, 1.0)


def phi_from_sign(s: int) -> complex:
    """Bernoulli factor ``(1 - i)/2 * s + (1 + i)/2``: 1 for +1, i for -1."""
    if s == 1:
        return PHI_POS
    if s == -1:
        return PHI_NEG
    raise ValueError(f"sign must be +1 or -1, got {s!r}")


def phis(s) -> np.ndarray:
    """Vectorized :func:`phi_from_sign` over an array of signs."""
    return np.where(np.asarray(s) > 0, PHI_POS, PHI_NEG)


def increments(path) -> np.ndarray:
    """Per-step jumps of a path (or raw array along its last axis).

    ``out[0] = values[0]`` and ``out[i] = values[i] - values[i-1]``.
    """
    vals = path.values if isinstance(path, (BrownianPath, ComplexPath)) else np.asarray(path)
    if vals.size == 0 or vals.shape[-1] == 0:
        raise ValueError("increments of an empty path are undefined")
    return np.diff(vals, axis=-1, prepend=np.zeros_like(vals[..., :1]))


def cumulative_sum(steps) -> np.ndarray:
    """Left-to-right running sum along the last axis."""
    return np.cumsum(np.asarray(steps), axis=-1)
