"""Invariant checks run by ``fracwiener verify``.

Each check returns a :class:`Check`; the runner prints one line per check.
Tolerances that involve path arithmetic carry a floating-point slack sized
from the magnitudes involved, on top of the analytic residual bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import clifford as cl
from .ensemble import EnsembleConfig, residual_decomposition_stats, run_ensemble
from .fracpower import (
    Scheme,
    SqrtRepMode,
    direct_power_path,
    recover_brownian,
    recovery_error_bound,
    sqrt_rep_coefficient,
    sqrt_rep_path,
    squared_jump_decomposition,
)
from .types import BrownianPath, phi_from_sign, increments, signs

EPS = np.finfo(np.float64).eps


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + (f": {self.detail}" if self.detail else "")


def check_phi_laws() -> Check:
    ok = all(phi_from_sign(s) ** 2 == s and abs(phi_from_sign(s)) == 1.0 for s in (1, -1))
    return Check("phi_squared_equals_sign", ok)


def check_pauli_algebra() -> Check:
    eye = cl.identity()
    bad = []
    for n in (1, 2, 3):
        s = cl.pauli(n)
        if not np.array_equal(s @ s, eye):
            bad.append(f"sigma{n}^2 != I")
        for k in (1, 2, 3):
            if k != n:
                t = cl.pauli(k)
                if np.any(s @ t + t @ s != 0):
                    bad.append(f"{{sigma{n}, sigma{k}}} != 0")
    if not np.array_equal(cl.pauli(1) @ cl.pauli(2), 1j * cl.pauli(3)):
        bad.append("sigma1 sigma2 != i sigma3")
    return Check("pauli_algebra", not bad, "; ".join(bad))


def check_abs_sign_identity(w: BrownianPath) -> Check:
    dw = increments(w)
    ok = np.array_equal(np.abs(dw) * signs(dw), dw) and np.array_equal(
        np.abs(w.values) * signs(w.values), w.values)
    return Check("abs_times_sign_identity", bool(ok))


def check_direct_roundtrip(w: BrownianPath, alpha: float) -> Check:
    x = direct_power_path(w, alpha)
    rec = recover_brownian(x, w, scheme=Scheme.DIRECT_POWER, alpha=alpha)
    err = float(np.max(np.abs(increments(rec) - increments(w))))
    return Check(f"direct_power_roundtrip(alpha={alpha:g})", err <= 1e-10, f"max err {err:.3e}")


def _sqrt_slack(x, mu0: float) -> np.ndarray:
    # rounding of X_i - X_{i-1} on large partial sums, then of c**2 - mu0**2
    c = np.abs(increments(x))
    return 8 * EPS * (c * (np.abs(x.values) + c) + mu0 * mu0)


def check_sqrt_roundtrip(w: BrownianPath, mu0: float) -> Check:
    dt = w.grid.dt
    x, phi = sqrt_rep_path(w, mu0)
    dw = increments(w)
    rec = increments(recover_brownian(x, w, scheme=Scheme.SQRT_REP, mu0=mu0))
    bound = recovery_error_bound(dw, mu0, dt) + _sqrt_slack(x, mu0)
    err = np.abs(rec - dw)
    # cumsum in the recovery adds telescoping error on top of the per-step error
    worst = float(np.max(err - bound - 4 * EPS * np.abs(np.cumsum(rec))))
    free = increments(recover_brownian(x, scheme=Scheme.SQRT_REP, mu0=mu0, phi=phi))
    same = np.array_equal(free, rec)
    return Check("sqrt_rep_residual_bound", worst <= 0 and same,
                 f"max err {float(err.max()):.3e}, bound {float(bound.max()):.3e}"
                 + ("" if same else "; phi-based recovery differs"))


def check_level_mode(w: BrownianPath, mu0: float) -> Check:
    x, _ = sqrt_rep_path(w, mu0, SqrtRepMode.LEVEL)
    rec = recover_brownian(x, w, scheme=Scheme.SQRT_REP, mu0=mu0, mode=SqrtRepMode.LEVEL).values
    bound = recovery_error_bound(w.values, mu0, w.grid.dt) + _sqrt_slack(x, mu0)
    err = np.abs(rec - w.values)
    return Check("level_mode_residual_bound", bool(np.all(err <= bound)),
                 f"max err {float(err.max()):.3e}")


def check_decomposition(w: BrownianPath, mu0: float) -> Check:
    dt = w.grid.dt
    dw = increments(w)
    terms = squared_jump_decomposition(dw, mu0, dt)
    c = sqrt_rep_coefficient(np.abs(dw), mu0, dt)
    direct = c * c * signs(dw)
    rel = float(np.max(np.abs(terms.total - direct) / np.abs(direct)))
    return Check("squared_jump_decomposition", rel <= 1e-12, f"max rel err {rel:.3e}")


def check_jump_modulus(w: BrownianPath, mu0: float) -> Check:
    dt = w.grid.dt
    dw = increments(w)
    x, phi = sqrt_rep_path(w, mu0)
    dx = increments(x)
    mod = np.abs(dx)
    a = np.abs(dw)
    m = abs(mu0)
    slack = 4 * EPS * (np.abs(x.values) + m)
    lo = m - a / (2 * m) - dt / (8 * m**3) - slack
    hi = m + a / (2 * m) + slack
    in_range = bool(np.all((mod >= lo) & (mod <= hi)))
    phi_ok = bool(np.array_equal(np.imag(phi.values) != 0, dw < 0))
    # imaginary part of each jump, not of the differenced path
    imag_ok = bool(np.array_equal(np.imag(dx) != 0, dw < 0))
    return Check("sqrt_rep_jump_modulus_and_phase", in_range and phi_ok and imag_ok,
                 f"modulus in [{float(mod.min()):.6f}, {float(mod.max()):.6f}]")


def check_clifford(w: BrownianPath, mu0: float, pair) -> Check:
    dt = w.grid.dt
    dw = increments(w)
    sq = cl.clifford_square(cl.clifford_jump(dw, mu0, dt, pair))
    off = float(max(np.max(np.abs(sq[:, 0, 1])), np.max(np.abs(sq[:, 1, 0]))))
    d0, d1 = sq[:, 0, 0], sq[:, 1, 1]
    diag_eq = bool(np.all(np.abs(d0 - d1) <= 1e-12))
    terms = squared_jump_decomposition(dw, mu0, dt)
    scale = 64 * EPS * (mu0 * mu0 + np.abs(dw))
    exact = bool(np.all(np.abs(d0.real - dw - terms.residual) <= scale)) and bool(np.all(np.abs(d0.imag) <= 1e-12))
    within = bool(np.all(np.abs(d0.real - dw) <= recovery_error_bound(dw, mu0, dt) + scale))
    ok = off <= 1e-12 and diag_eq and exact and within
    return Check("clifford_sign_elimination", ok,
                 f"off-diag {off:.1e}, max |diag - dW| {float(np.max(np.abs(d0.real - dw))):.3e}")


def check_clifford_pairs(w: BrownianPath, mu0: float) -> Check:
    dt = w.grid.dt
    dw = increments(w)
    diags = [cl.clifford_square(cl.clifford_jump(dw, mu0, dt, (i, k)))[:, 0, 0]
             for i in (1, 2, 3) for k in (1, 2, 3) if i != k]
    spread = float(max(np.max(np.abs(d - diags[0])) for d in diags))
    return Check("clifford_pair_independence", spread <= 1e-12, f"spread {spread:.1e}")


def check_ensemble(cfg: EnsembleConfig, workers: int = 1) -> list[Check]:
    s = run_ensemble(cfg, workers=workers)
    m = cfg.paths
    dt = cfg.grid.dt
    out = []
    # per-step bound at an 8-sigma increment; reduces to 1e-4 at mu0=30, dt=2**-8
    sqrt_lim = max(1e-4, float(recovery_error_bound(8 * math.sqrt(dt), cfg.mu0, dt)))
    for name, entry in s.schemes.items():
        err = entry["coincidence_max_abs_err"]
        lim = 1e-10 if name == "directpower" else sqrt_lim
        out.append(Check(f"ensemble_coincidence[{name}]", err <= lim, f"{err:.3e} <= {lim:.1e}"))
    r = residual_decomposition_stats(cfg, workers=workers)
    mx = r["max_abs"]
    clt = [("sgn", 4 / math.sqrt(m)), ("dw2_minus_dt", 4 * math.sqrt(2) * dt / math.sqrt(m)),
           ("dw_dt", 4 * dt**1.5 / math.sqrt(m))]
    for key, lim in clt:
        out.append(Check(f"residual_clt[{key}]", mx[key] <= lim, f"{mx[key]:.3e} <= {lim:.3e}"))
    half_normal = math.sqrt(2 * dt / math.pi)
    rel = abs(r["abs_means"]["dw"] - half_normal) / half_normal
    out.append(Check("mean_abs_dw_half_normal", rel <= 0.05, f"rel err {rel:.3e}"))
    return out


def run_checks(w: BrownianPath, mu0: float, alpha: float, pair=(1, 2),
               ensemble: EnsembleConfig | None = None, workers: int = 1) -> list[Check]:
    checks = [
        check_phi_laws(),
        check_pauli_algebra(),
        check_abs_sign_identity(w),
        check_direct_roundtrip(w, 0.5),
    ]
    if alpha != 0.5:
        checks.append(check_direct_roundtrip(w, alpha))
    checks += [
        check_sqrt_roundtrip(w, mu0),
        check_level_mode(w, mu0),
        check_decomposition(w, mu0),
        check_jump_modulus(w, mu0),
        check_clifford(w, mu0, pair),
        check_clifford_pairs(w, mu0),
    ]
    if ensemble is not None:
        checks += check_ensemble(ensemble, workers)
    return checks
