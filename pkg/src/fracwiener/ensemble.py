"""Monte Carlo harness over many Brownian paths.

Paths are processed in fixed blocks of ``BLOCK_SIZE`` consecutive path
indices. Each block yields partial sums; blocks are combined in index
order, so the summary is bit-identical for any number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import asdict, dataclass, field

import numpy as np

from .clifford import PauliPair, clifford_jumps, recover_clifford_jumps
from .fracpower import (
    Alpha,
    MuZero,
    Scheme,
    direct_power_jumps,
    recover_direct_jumps,
    recover_sqrt_jumps,
    sqrt_rep_jumps,
    sqrt_rep_path,
)
from .pathgen import Sampler, SeedSpec, brownian_path, gaussian_increments, increment_block
from .types import TimeGrid, cumulative_sum, increments, signs

log = logging.getLogger(__name__)

BLOCK_SIZE = 250
RESIDUAL_KEYS = ("sgn", "dw2_minus_dt", "dw_dt", "dw")


class EnsembleError(RuntimeError):
    pass


@dataclass(frozen=True)
class EnsembleConfig:
    paths: int = 10000
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(1.0, 256))
    mu0: float = 30.0
    alpha: float = 0.5
    master_seed: int = 0
    schemes: tuple = (Scheme.DIRECT_POWER, Scheme.SQRT_REP, Scheme.CLIFFORD)
    pair: tuple = (1, 2)
    profile_path_index: int = 0

    def __post_init__(self):
        if isinstance(self.paths, bool) or int(self.paths) != self.paths or self.paths < 1:
            raise ValueError(f"paths must be a positive integer, got {self.paths!r}")
        MuZero(self.mu0)
        Alpha(self.alpha)
        SeedSpec(self.master_seed, 0)
        PauliPair.of(self.pair)
        schemes = tuple(Scheme(s) for s in self.schemes)
        if not schemes:
            raise ValueError("at least one scheme must be enabled")
        object.__setattr__(self, "schemes", tuple(dict.fromkeys(schemes)))
        object.__setattr__(self, "pair", tuple(self.pair))
        if not 0 <= self.profile_path_index < self.paths:
            raise ValueError(
                f"profile_path_index {self.profile_path_index} outside [0, {self.paths})")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = {"t_max": self.grid.t_max, "steps": self.grid.steps, "dt": self.grid.dt}
        d["schemes"] = [s.value for s in self.schemes]
        d["pair"] = list(self.pair)
        return d


@dataclass
class EnsembleSummary:
    """Per-step ensemble means and recovery errors.

    ``schemes[name]`` holds ``mean_recovered_increment``,
    ``mean_recovered_cumsum``, ``coincidence_max_abs_err`` (max over steps of
    |mean dW - mean recovered jump|) and ``cumsum_max_abs_err``. The
    square-root entry also carries ``mean_raw_squared_jump_cumsum``, the
    same series before the ``mu0**2 * sgn`` term is removed.
    """

    config: dict
    mean_brownian: np.ndarray
    mean_increment: np.ndarray
    schemes: dict
    jump_coincidence_max_abs_err: float
    residuals: dict
    residual_means: dict
    single_path_profile: dict

    def to_dict(self) -> dict:
        def conv(v):
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, dict):
                return {k: conv(x) for k, x in v.items()}
            if isinstance(v, np.floating):
                return float(v)
            return v
        return {k: conv(v) for k, v in asdict(self).items()}


def _block_sums(cfg: EnsembleConfig, start: int, stop: int, sampler: Sampler,
                with_schemes: bool = True) -> dict:
    grid = cfg.grid
    dt = grid.dt
    dw = increment_block(cfg.master_seed, start, stop, grid, sampler)
    w = cumulative_sum(dw)
    sg = signs(dw)
    dw2_dt = dw * dw - dt
    out = {
        "w": w.sum(axis=0),
        "dw": dw.sum(axis=0),
        "sgn": sg.sum(axis=0),
        "dw2_minus_dt": dw2_dt.sum(axis=0),
        "dw_dt": (dw * dt).sum(axis=0),
        "abs_dw": np.abs(dw).sum(axis=0),
        "abs_dw2_minus_dt": np.abs(dw2_dt).sum(axis=0),
        "abs_dw_dt": np.abs(dw * dt).sum(axis=0),
    }
    if not with_schemes:
        return out
    for scheme in cfg.schemes:
        if scheme is Scheme.DIRECT_POWER:
            x = cumulative_sum(direct_power_jumps(dw, cfg.alpha))
            rec = recover_direct_jumps(increments(x), cfg.alpha, sg)
        elif scheme is Scheme.SQRT_REP:
            x = cumulative_sum(sqrt_rep_jumps(dw, cfg.mu0, dt))
            dx = increments(x)
            rec = recover_sqrt_jumps(dx, cfg.mu0, sg)
            out["raw:" + scheme.value] = (dx * dx).real.sum(axis=0)
        else:
            e = np.cumsum(clifford_jumps(dw, cfg.mu0, dt, PauliPair.of(cfg.pair)), axis=1)
            de = np.diff(e, axis=1, prepend=np.zeros_like(e[:, :1]))
            rec = recover_clifford_jumps(de)
        out["rec:" + scheme.value] = rec.sum(axis=0)
    return out


def _block_task(args):
    return _block_sums(*args)


def _accumulate(cfg: EnsembleConfig, sampler: Sampler, workers: int, with_schemes: bool) -> dict:
    blocks = [(cfg, s, min(s + BLOCK_SIZE, cfg.paths), sampler, with_schemes)
              for s in range(0, cfg.paths, BLOCK_SIZE)]
    try:
        if workers <= 1 or len(blocks) == 1:
            parts = map(_block_task, blocks)
            return _combine(parts)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return _combine(pool.map(_block_task, blocks))
    except (MemoryError, BrokenProcessPool, OSError) as exc:
        raise EnsembleError(f"ensemble run failed: {exc}") from exc


def _combine(parts) -> dict:
    total = None
    for part in parts:
        if total is None:
            total = {k: v.copy() for k, v in part.items()}
        else:
            for k, v in part.items():
                total[k] += v
    return total


def residual_decomposition_stats(cfg: EnsembleConfig, sampler: Sampler = gaussian_increments,
                                 workers: int = 1) -> dict:
    """Per-step ensemble means of sgn(dW), dW**2 - dt, dW*dt and dW.

    Also returns ``abs_means``: the grand means of the absolute values of
    the same four quantities, and ``max_abs``: the largest per-step mean
    magnitude of each.
    """
    tot = _accumulate(cfg, sampler, workers, with_schemes=False)
    return _residuals(tot, cfg)


def _residuals(tot: dict, cfg: EnsembleConfig) -> dict:
    m = cfg.paths
    n = cfg.grid.steps
    per_step = {k: tot[k] / m for k in RESIDUAL_KEYS}
    abs_means = {
        "sgn": 1.0,
        "dw2_minus_dt": float(tot["abs_dw2_minus_dt"].sum() / (m * n)),
        "dw_dt": float(tot["abs_dw_dt"].sum() / (m * n)),
        "dw": float(tot["abs_dw"].sum() / (m * n)),
    }
    max_abs = {k: float(np.max(np.abs(v))) for k, v in per_step.items()}
    return {"per_step": per_step, "abs_means": abs_means, "max_abs": max_abs}


def single_path_profile(cfg: EnsembleConfig, path_index: int | None = None,
                        sampler: Sampler = gaussian_increments) -> dict:
    """Modulus, phase (degrees) and jump modulus of one square-root path."""
    idx = cfg.profile_path_index if path_index is None else path_index
    if not 0 <= idx < cfg.paths:
        raise IndexError(f"path_index {idx} outside [0, {cfg.paths})")
    w = brownian_path(SeedSpec(cfg.master_seed, idx), cfg.grid, sampler)
    x, _ = sqrt_rep_path(w, cfg.mu0)
    xv = x.values
    return {
        "path_index": idx,
        "modulus": np.abs(xv),
        "phase_deg": np.degrees(np.angle(xv)),
        "jump_modulus": np.abs(increments(x)),
    }


def run_ensemble(cfg: EnsembleConfig, sampler: Sampler = gaussian_increments,
                 workers: int = 1) -> EnsembleSummary:
    """Simulate ``cfg.paths`` Brownian paths and every enabled scheme on each.

    The result does not depend on ``workers``.
    """
    log.info("running %d paths x %d steps on %d worker(s)", cfg.paths, cfg.grid.steps, workers)
    tot = _accumulate(cfg, sampler, workers, with_schemes=True)
    m = cfg.paths
    mean_dw = tot["dw"] / m
    mean_w = tot["w"] / m
    schemes = {}
    for scheme in cfg.schemes:
        rec = tot["rec:" + scheme.value] / m
        rec_cs = cumulative_sum(rec)
        entry = {
            "mean_recovered_increment": rec,
            "mean_recovered_cumsum": rec_cs,
            "coincidence_max_abs_err": float(np.max(np.abs(rec - mean_dw))),
            "cumsum_max_abs_err": float(np.max(np.abs(rec_cs - mean_w))),
        }
        if scheme is Scheme.SQRT_REP:
            entry["mean_raw_squared_jump_cumsum"] = cumulative_sum(tot["raw:" + scheme.value] / m)
        schemes[scheme.value] = entry
    res = _residuals(tot, cfg)
    return EnsembleSummary(
        config=cfg.to_dict(),
        mean_brownian=mean_w,
        mean_increment=mean_dw,
        schemes=schemes,
        jump_coincidence_max_abs_err=max(s["coincidence_max_abs_err"] for s in schemes.values()),
        residuals=res["per_step"],
        residual_means=res["abs_means"],
        single_path_profile=single_path_profile(cfg, sampler=sampler),
    )
