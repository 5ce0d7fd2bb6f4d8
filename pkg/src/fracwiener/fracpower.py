"""Alpha-root processes of a Brownian path and their inversion.

Two scalar schemes are provided:

* direct power: ``X_i = X_{i-1} + (W_i - W_{i-1}) ** alpha`` on the
  principal branch of the complex power;
* square-root representation: ``X_i = X_{i-1} + c_i * Phi_i`` with
  ``c_i = mu0 + |dW_i| / (2 mu0) - dt / (8 mu0**3)`` and ``Phi_i`` equal to
  1 or i according to the sign of the step.

Squaring a square-root jump gives ``mu0**2 * sgn(dW) + dW`` plus Ito-order
residuals, so recovery subtracts the sign term before summing.

The array helpers (``*_jumps``) broadcast over leading axes and are what
the ensemble runner calls; the path-level functions wrap them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .types import (
    BrownianPath,
    ComplexPath,
    PhiSequence,
    cumulative_sum,
    increments,
    phis,
    signs,
)


@dataclass(frozen=True)
class Alpha:
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (0.0 < v <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, a: "Alpha | float") -> "Alpha":
        return a if isinstance(a, Alpha) else cls(a)


@dataclass(frozen=True)
class MuZero:
    value: float = 30.0

    def __post_init__(self):
        v = float(self.value)
        if not (math.isfinite(v) and abs(v) > 0.5):
            raise ValueError(f"mu0 must satisfy |mu0| > 1/2, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, m: "MuZero | float") -> "MuZero":
        return m if isinstance(m, MuZero) else cls(m)


class SqrtRepMode(str, enum.Enum):
    INCREMENT = "increment"  # sign and modulus of W_i - W_{i-1}
    LEVEL = "level"          # sign and modulus of W_i itself


class Scheme(str, enum.Enum):
    DIRECT_POWER = "directpower"
    SQRT_REP = "sqrtrep"
    CLIFFORD = "clifford"


# --- array helpers -----------------------------------------------------------

def complex_power(z, p: float) -> np.ndarray:
    """Principal-branch ``z ** p`` (argument in (-pi, pi]).

    Exact special cases keep ``(z ** 0.5) ** 2 == z`` free of log/exp noise.
    Real inputs are promoted with a +0.0 imaginary part so negative reals
    sit on the upper side of the cut.
    """
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        z = z.astype(np.float64) + 0.0j
    if p == 1.0:
        return z.copy()
    if p == 0.5:
        return np.sqrt(z)
    if p == 2.0:
        return z * z
    return np.power(z, p)


def direct_power_jumps(dw, alpha: float) -> np.ndarray:
    return complex_power(dw, alpha)


def sqrt_rep_coefficient(modulus, mu0: float, dt: float):
    """``mu0 + modulus / (2 mu0) - dt / (8 mu0**3)``."""
    return mu0 + modulus / (2.0 * mu0) - dt / (8.0 * mu0**3)


def sqrt_rep_jumps(driver, mu0: float, dt: float) -> np.ndarray:
    """Square-root jumps ``c * Phi`` driven by increments or levels."""
    driver = np.asarray(driver, dtype=np.float64)
    return sqrt_rep_coefficient(np.abs(driver), mu0, dt) * phis(signs(driver))


def recover_direct_jumps(dx, alpha: float, ref_signs=None) -> np.ndarray:
    """``(dX) ** (1/alpha)`` reduced to a real jump.

    For alpha <= 1 the principal branch composes back exactly and the real
    part is the jump. For alpha > 1 a negative increment wraps around the
    cut, so the modulus is kept and the reference sign reapplied.
    """
    s = complex_power(dx, 1.0 / alpha)
    if alpha <= 1.0:
        return s.real.copy()
    if ref_signs is None:
        raise ValueError("alpha > 1 needs the reference signs to undo branch wrapping")
    return np.abs(s) * ref_signs


def recover_sqrt_jumps(dx, mu0: float, ref_signs) -> np.ndarray:
    """``(dX)**2 - mu0**2 * sgn``: the squared jump with the sign process removed."""
    dx = np.asarray(dx)
    return (dx * dx).real - mu0 * mu0 * ref_signs


def recovery_error_bound(dw, mu0: float, dt: float):
    """Per-step bound on ``|recovered - dW|`` for the square-root scheme."""
    a = np.abs(dw)
    return ((a * a + dt) / (4.0 * mu0**2) + dt * a / (8.0 * mu0**4)
            + dt * dt / (64.0 * mu0**6))


# --- path-level operations ---------------------------------------------------

def direct_power_path(w: BrownianPath, alpha: Alpha | float) -> ComplexPath:
    """Euler-Maruyama sum of ``(dW) ** alpha``."""
    a = Alpha.of(alpha).value
    return ComplexPath(w.grid, cumulative_sum(direct_power_jumps(increments(w), a)))


def sqrt_rep_path(w: BrownianPath, mu0: MuZero | float = 30.0,
                  mode: SqrtRepMode = SqrtRepMode.INCREMENT) -> tuple[ComplexPath, PhiSequence]:
    """Square-root process of ``w`` and the Phi factors used to build it.

    In increment mode sign and modulus are taken from ``W_i - W_{i-1}``;
    in level mode from ``W_i``.
    """
    m = MuZero.of(mu0).value
    mode = SqrtRepMode(mode)
    driver = increments(w) if mode is SqrtRepMode.INCREMENT else w.values
    jumps = sqrt_rep_jumps(driver, m, w.grid.dt)
    return ComplexPath(w.grid, cumulative_sum(jumps)), PhiSequence(phis(signs(driver)))


@dataclass(frozen=True)
class SquaredJumpTerms:
    """Term-by-term expansion of a squared square-root jump.

    ``residual_terms`` keys: ``dw2_sgn`` (dW**2 sgn / 4mu0**2), ``dt_sgn``
    (-dt sgn / 4mu0**2), ``dt2_sgn`` (dt**2 sgn / 64mu0**6) and ``dt_dw``
    (-dt dW / 8mu0**4).
    """

    dominant_sign_term: float
    dominant_dw_term: float
    residual_terms: dict = field(default_factory=dict)

    @property
    def residual(self):
        r = 0.0
        for v in self.residual_terms.values():
            r = r + v
        return r

    @property
    def total(self):
        return self.dominant_sign_term + self.dominant_dw_term + self.residual


def squared_jump_decomposition(dw, mu0: MuZero | float, dt: float) -> SquaredJumpTerms:
    """Split ``(c * Phi)**2`` into its dominant and negligible parts.

    Works elementwise when ``dw`` is an array.
    """
    m = MuZero.of(mu0).value
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    dw = np.asarray(dw, dtype=np.float64)
    s = signs(dw)
    m2 = m * m
    terms = {
        "dw2_sgn": s * dw * dw / (4.0 * m2),
        "dt_sgn": -s * dt / (4.0 * m2),
        "dt2_sgn": s * dt * dt / (64.0 * m2 * m2 * m2),
        "dt_dw": -dt * dw / (8.0 * m2 * m2),
    }
    if dw.ndim == 0:
        terms = {k: float(v) for k, v in terms.items()}
        return SquaredJumpTerms(float(m2 * s), float(dw), terms)
    return SquaredJumpTerms(m2 * s, dw.copy(), terms)


def recover_brownian(x: ComplexPath, w_reference: BrownianPath | None = None, *,
                     scheme: Scheme = Scheme.SQRT_REP, alpha: Alpha | float = 0.5,
                     mu0: MuZero | float | None = None,
                     mode: SqrtRepMode = SqrtRepMode.INCREMENT,
                     phi: PhiSequence | None = None) -> BrownianPath:
    """Regenerate the Brownian path from an alpha-root path.

    Jumps ``S_i = (X_i - X_{i-1}) ** (1/alpha)`` are formed, corrected by
    the reference signs where the branch requires it, and summed.

    For the square-root scheme the ``mu0**2 * sgn`` term is subtracted
    using the signs of ``w_reference`` or, when no reference is given, the
    signs read off ``phi``. In level mode the squared jumps already are the
    path levels, so they are returned without summation.
    """
    scheme = Scheme(scheme)
    if w_reference is not None and w_reference.grid != x.grid:
        raise ValueError(f"grid mismatch: {x.grid} vs {w_reference.grid}")
    dx = increments(x)

    if scheme is Scheme.DIRECT_POWER:
        a = Alpha.of(alpha).value
        ref = None if w_reference is None else signs(increments(w_reference))
        return BrownianPath(x.grid, cumulative_sum(recover_direct_jumps(dx, a, ref)))

    if scheme is not Scheme.SQRT_REP:
        raise ValueError(f"recover_brownian handles scalar schemes only, got {scheme}")
    if mu0 is None:
        raise ValueError("mu0 is required to remove the sign process of the square-root scheme")
    m = MuZero.of(mu0).value
    mode = SqrtRepMode(mode)
    if w_reference is not None:
        driver = increments(w_reference) if mode is SqrtRepMode.INCREMENT else w_reference.values
        ref = signs(driver)
    elif phi is not None:
        if len(phi) != len(x):
            raise ValueError("Phi sequence length does not match the path")
        ref = phi.signs().values.astype(np.float64)
    else:
        raise ValueError("square-root recovery needs w_reference or phi for the signs")
    s = recover_sqrt_jumps(dx, m, ref)
    if mode is SqrtRepMode.LEVEL:
        return BrownianPath(x.grid, s)
    return BrownianPath(x.grid, cumulative_sum(s))
