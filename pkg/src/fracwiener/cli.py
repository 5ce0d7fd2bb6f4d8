"""Command-line driver: ``simulate``, ``ensemble`` and ``verify``.

Exit codes: 0 success, 1 invalid arguments or input, 2 I/O failure,
3 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .clifford import PauliPair, clifford_path, clifford_square, pauli
from .ensemble import EnsembleConfig, EnsembleError, run_ensemble
from .fracpower import (
    Alpha,
    MuZero,
    Scheme,
    SqrtRepMode,
    direct_power_path,
    recover_brownian,
    sqrt_rep_path,
)
from .output import PathFileError, read_path_values, write_csv, write_json
from .pathgen import SeedSpec, brownian_path
from .types import BrownianPath, TimeGrid, increments
from .verify import run_checks

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3
SEED_ENV = "FRACWIENER_SEED"

log = logging.getLogger("fracwiener")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _scheme_list(text: str) -> list:
    try:
        return [Scheme(s.strip().lower()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pair(text: str) -> tuple:
    try:
        i, k = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"pair must look like '1,2', got {text!r}") from None
    return (i, k)


def _add_common(p: argparse.ArgumentParser, schemes_default: str):
    p.add_argument("--config", help="JSON file whose keys set defaults for these flags")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (else ${SEED_ENV}, else 0)")
    p.add_argument("--steps", type=int, default=256, help="number of time steps N")
    p.add_argument("--dt", type=float, default=2.0**-8, help="time step; T = dt * steps")
    p.add_argument("--mu0", type=float, default=30.0, help="scale factor, |mu0| > 1/2")
    p.add_argument("--alpha", type=float, default=0.5, help="root exponent in (0, 2]")
    p.add_argument("--scheme", dest="schemes", type=_scheme_list, default=_scheme_list(schemes_default),
                   help="comma list of directpower, sqrtrep, clifford")
    p.add_argument("--pair", type=_pair, default=(1, 2), help="Pauli indices i,k for clifford")
    p.add_argument("-o", "--output-dir", default=".", help="directory for emitted files")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracwiener",
                     description="Simulate and verify fractional powers of Wiener processes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="one Brownian path through each scheme")
    _add_common(p, "directpower,sqrtrep,clifford")
    p.add_argument("--path-index", type=int, default=0, help="which path of the seed's stream")
    p.add_argument("--mode", choices=[m.value for m in SqrtRepMode], default="increment",
                   help="sqrtrep driver: increments (default) or levels")

    p = sub.add_parser("ensemble", help="Monte Carlo run over many paths")
    _add_common(p, "directpower,sqrtrep,clifford")
    p.add_argument("--paths", type=int, default=10000, help="number of paths M")
    p.add_argument("--profile-path-index", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="run the invariant checks, PASS/FAIL per check")
    _add_common(p, "directpower,sqrtrep,clifford")
    p.add_argument("--paths", type=int, default=1000, help="paths for the ensemble checks (0 skips them)")
    p.add_argument("--path-index", type=int, default=0)
    p.add_argument("--path-file", help="CSV with a W column to check instead of a generated path")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _parse(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise _IOFailure(f"cannot read config {args.config}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            parser.error(f"config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            parser.error(f"config {args.config}: expected a JSON object")
        sp = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sp._actions}
        unknown = set(cfg) - known
        if unknown:
            parser.error(f"config {args.config}: unknown keys {sorted(unknown)}")
        if "schemes" in cfg and isinstance(cfg["schemes"], list):
            cfg["schemes"] = ",".join(cfg["schemes"])
        if "pair" in cfg and isinstance(cfg["pair"], list):
            cfg["pair"] = ",".join(str(v) for v in cfg["pair"])
        sp.set_defaults(**{k: _convert(sp, k, v) for k, v in cfg.items()})
        args = parser.parse_args(argv)
    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            parser.error(f"${SEED_ENV} must be an integer, got {env!r}")
    return args


def _convert(sp, dest, value):
    for action in sp._actions:
        if action.dest == dest and action.type is not None and isinstance(value, str):
            return action.type(value)
    return value


class _IOFailure(Exception):
    pass


def _validate(args) -> TimeGrid:
    grid = TimeGrid.from_dt(args.dt, args.steps)
    MuZero(args.mu0)
    Alpha(args.alpha)
    SeedSpec(args.seed, 0)
    PauliPair.of(args.pair)
    if not args.schemes:
        raise ValueError("at least one scheme is required")
    return grid


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise _IOFailure(f"cannot create output directory {out}: {exc.strerror or exc}") from None
    return out


def _sigma_component(e: np.ndarray, n: int) -> np.ndarray:
    # coefficient of sigma_n in a traceless 2x2 stack: tr(sigma_n E) / 2
    return np.einsum("ij,nji->n", pauli(n), e) / 2


def cmd_simulate(args) -> int:
    grid = _validate(args)
    w = brownian_path(SeedSpec(args.seed, args.path_index), grid)
    dw = increments(w)
    out = _outdir(args)
    mode = SqrtRepMode(args.mode)
    for scheme in dict.fromkeys(args.schemes):
        cols = {"step": np.arange(grid.steps), "t": grid.times, "W": w.values}
        if scheme is Scheme.DIRECT_POWER:
            x = direct_power_path(w, args.alpha)
            rec = increments(recover_brownian(x, w, scheme=scheme, alpha=args.alpha))
            xv = x.values
            jump = np.abs(increments(x))
        elif scheme is Scheme.SQRT_REP:
            x, _ = sqrt_rep_path(w, args.mu0, mode)
            r = recover_brownian(x, w, scheme=scheme, mu0=args.mu0, mode=mode)
            rec = r.values if mode is SqrtRepMode.LEVEL else increments(r)
            xv = x.values
            jump = np.abs(increments(x))
        else:
            e = clifford_path(w, args.mu0, args.pair)
            de = np.diff(e.values, axis=0, prepend=np.zeros((1, 2, 2)))
            rec = clifford_square(de)[:, 0, 0].real
            xv = _sigma_component(e.values, args.pair[0])
            xk = _sigma_component(e.values, args.pair[1])
            # sqrt(|a|^2 + |b|^2) for dE = a sigma_i + b sigma_k
            jump = np.linalg.norm(de, axis=(1, 2)) / np.sqrt(2)
        cols.update({"Re(X)": xv.real, "Im(X)": xv.imag})
        if scheme is Scheme.CLIFFORD:
            cols.update({"Re(Xk)": xk.real, "Im(Xk)": xk.imag})
        cols.update({"|dX|": jump, "recovered_increment": rec,
                     "reference_increment": w.values if (scheme is Scheme.SQRT_REP and mode is SqrtRepMode.LEVEL) else dw})
        name = out / f"simulate_{scheme.value}.{args.format}"
        if args.format == "csv":
            write_csv(name, cols)
        else:
            write_json(name, {"config": _run_config(args, grid),
                              "series": {k: np.asarray(v).tolist() for k, v in cols.items()}})
        print(name)
    return EXIT_OK


def _run_config(args, grid: TimeGrid) -> dict:
    return {"seed": args.seed, "t_max": grid.t_max, "steps": grid.steps, "dt": grid.dt,
            "mu0": args.mu0, "alpha": args.alpha, "schemes": [s.value for s in args.schemes],
            "pair": list(args.pair)}


def cmd_ensemble(args) -> int:
    grid = _validate(args)
    cfg = EnsembleConfig(paths=args.paths, grid=grid, mu0=args.mu0, alpha=args.alpha,
                         master_seed=args.seed, schemes=tuple(args.schemes), pair=args.pair,
                         profile_path_index=args.profile_path_index)
    summary = run_ensemble(cfg, workers=args.workers).to_dict()
    out = _outdir(args)
    write_json(out / "ensemble_summary.json", summary)
    if args.format == "csv":
        cols = {"step": np.arange(grid.steps), "t": grid.times,
                "mean_brownian": summary["mean_brownian"], "mean_increment": summary["mean_increment"]}
        for name, entry in summary["schemes"].items():
            cols[f"{name}_mean_recovered_cumsum"] = entry["mean_recovered_cumsum"]
            if "mean_raw_squared_jump_cumsum" in entry:
                cols[f"{name}_mean_raw_squared_jump_cumsum"] = entry["mean_raw_squared_jump_cumsum"]
        for key, series in summary["residuals"].items():
            cols[f"residual_{key}"] = series
        write_csv(out / "ensemble_series.csv", cols)
        prof = summary["single_path_profile"]
        write_csv(out / "profile.csv", {"step": np.arange(grid.steps), "t": grid.times,
                                        "modulus": prof["modulus"], "phase_deg": prof["phase_deg"],
                                        "jump_modulus": prof["jump_modulus"]})
    for name, entry in summary["schemes"].items():
        print(f"{name}: coincidence_max_abs_err = {entry['coincidence_max_abs_err']:.6e}")
    print(f"written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = _validate(args)
    if args.path_file:
        try:
            values = read_path_values(args.path_file)
        except OSError as exc:
            print(f"FAIL path-file: cannot read {args.path_file}: {exc.strerror or exc}")
            return EXIT_IO
        except PathFileError as exc:
            print(f"FAIL path-file: {exc}")
            return EXIT_INVALID
        grid = TimeGrid.from_dt(args.dt, values.size)
        w = BrownianPath(grid, values)
    else:
        w = brownian_path(SeedSpec(args.seed, args.path_index), grid)
    ens = None
    if args.paths > 0:
        ens = EnsembleConfig(paths=args.paths, grid=grid, mu0=args.mu0, alpha=args.alpha,
                             master_seed=args.seed, schemes=tuple(args.schemes), pair=args.pair)
    checks = run_checks(w, args.mu0, args.alpha, args.pair, ens, args.workers)
    for c in checks:
        print(c.line())
    failed = sum(not c.ok for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


COMMANDS = {"simulate": cmd_simulate, "ensemble": cmd_ensemble, "verify": cmd_verify}


def main(argv=None) -> int:
    try:
        args = _parse(argv)
    except _IOFailure as exc:
        print(f"fracwiener: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ValueError, IndexError) as exc:
        print(f"fracwiener: invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except _IOFailure as exc:
        print(f"fracwiener: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"fracwiener: I/O error on {exc.filename or '?'}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except EnsembleError as exc:
        print(f"fracwiener: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
