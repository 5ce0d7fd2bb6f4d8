"""Pauli-matrix valued square-root process.

Elements of the algebra are plain ``(2, 2)`` complex128 arrays (stacks of
them have shape ``(..., 2, 2)``). The jump

    dE = Phi * (c * sigma_i + 1j * mu0 * sigma_k),   i != k

squares to ``sgn * (c**2 - mu0**2) * I``: the ``mu0**2 * sgn`` offset of the
scalar scheme cancels and the anticommutator kills the cross terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracpower import MuZero, sqrt_rep_coefficient
from .types import BrownianPath, TimeGrid, cumulative_sum, increments, phis, signs

_PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    2: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    3: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
for _m in _PAULI.values():
    _m.setflags(write=False)


def identity() -> np.ndarray:
    return np.eye(2, dtype=np.complex128)


def pauli(n: int) -> np.ndarray:
    """Standard Pauli matrix sigma_n, n in {1, 2, 3}."""
    try:
        return _PAULI[n].copy()
    except (KeyError, TypeError):
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {n!r}") from None


@dataclass(frozen=True)
class PauliPair:
    i_index: int = 1
    k_index: int = 2

    def __post_init__(self):
        if self.i_index not in _PAULI or self.k_index not in _PAULI:
            raise ValueError(f"Pauli indices must be in {{1, 2, 3}}, got {self}")
        if self.i_index == self.k_index:
            raise ValueError("Pauli pair needs two distinct indices")

    @classmethod
    def of(cls, p) -> "PauliPair":
        return p if isinstance(p, PauliPair) else cls(*p)


@dataclass(frozen=True, eq=False)
class CliffordPath:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True)
        if vals.shape != (self.grid.steps, 2, 2):
            raise ValueError(f"path has shape {vals.shape}, expected ({self.grid.steps}, 2, 2)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]


def clifford_jumps(dw, mu0: float, dt: float, pair: PauliPair = PauliPair()) -> np.ndarray:
    """Stack of jumps for an array of increments, shape ``dw.shape + (2, 2)``."""
    dw = np.asarray(dw, dtype=np.float64)
    phi = phis(signs(dw))[..., None, None]
    c = sqrt_rep_coefficient(np.abs(dw), mu0, dt)[..., None, None]
    return c * phi * _PAULI[pair.i_index] + (1j * mu0 * phi) * _PAULI[pair.k_index]


def clifford_jump(dw: float, mu0: MuZero | float, dt: float,
                  pair: PauliPair | tuple = PauliPair()) -> np.ndarray:
    """Algebra-valued square-root jump for a single Brownian increment."""
    m = MuZero.of(mu0).value
    return clifford_jumps(dw, m, dt, PauliPair.of(pair))


def clifford_square(e) -> np.ndarray:
    """Matrix square; broadcasts over leading axes."""
    e = np.asarray(e, dtype=np.complex128)
    return e @ e


def clifford_path(w: BrownianPath, mu0: MuZero | float = 30.0,
                  pair: PauliPair | tuple = PauliPair()) -> CliffordPath:
    """``E_i = sum_{j <= i} dE_j`` with Phi and |dW| taken from increments."""
    m = MuZero.of(mu0).value
    jumps = clifford_jumps(increments(w), m, w.grid.dt, PauliPair.of(pair))
    return CliffordPath(w.grid, np.cumsum(jumps, axis=0))


def recover_clifford_jumps(de) -> np.ndarray:
    """Real scalar part of ``(dE)**2``; no sign subtraction is needed."""
    sq = clifford_square(de)
    return sq[..., 0, 0].real.copy()


def recover_brownian_clifford(e: CliffordPath) -> BrownianPath:
    de = np.diff(e.values, axis=0, prepend=np.zeros((1, 2, 2), dtype=np.complex128))
    return BrownianPath(e.grid, cumulative_sum(recover_clifford_jumps(de)))
