"""Command-line front end: ``tma trial|ensemble|sweep``.

Exit status is 0 only when every requested output was written; usage and
configuration errors exit with 2, I/O failures with 1.
"""
from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load, preset_names
from .harness import default_workers, run_monte_carlo, run_noise_sweep, run_trial
from .output import (plot_mean_errors, plot_sweep, plot_trajectory, write_final_errors_csv,
                     write_manifest, write_summary_csv, write_sweep_csv, write_trial_csv)

SUBCOMMANDS = ("trial", "ensemble", "sweep")

_EPILOG = """\
config files are INI text with sections [target] [observer] [clock] [noise]
[rtls] [plkf] [circumnav] [run]; any key can be overridden with
--set section.key=value. Angles (noise.sigma_theta_deg, --sigma-theta) are in
DEGREES and converted to radians on load. Bundled presets: {presets}.

--sigma-theta / --sigma-p accept one value, a comma list (0.001,0.1,1) or an
inclusive range start:stop:step (1:10:1). Lists are only allowed for `sweep`,
which runs every (sigma_theta, sigma_p) combination.

Environment: TMA_THREADS caps the number of worker processes (default 1).
"""


@dataclass
class RunSpec:
    subcommand: str
    config: str
    out: Path
    seed: int | None = None
    trials: int | None = None
    sigma_theta_deg: list = field(default_factory=list)
    sigma_p: list = field(default_factory=list)
    estimator: str | None = None
    overrides: list = field(default_factory=list)


class UsageError(Exception):
    pass


def parse_levels(text: str) -> list[float]:
    """``"1:10:1"`` -> [1, 2, ..., 10]; ``"0.1,1"`` -> [0.1, 1.0]; ``"5"`` -> [5.0]."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise ValueError
            start, stop, step = parts
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [float(f"{start + i * step:.12g}") for i in range(n)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tma", description="Bearing-only TMA simulations: RTLS vs PLKF with circumnavigation.",
        epilog=_EPILOG.format(presets=", ".join(preset_names())),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=SUBCOMMANDS,
                        help="trial: one closed-loop run; ensemble: Monte Carlo; sweep: noise sweep")
    parser.add_argument("--config", required=True, help="config file path or bundled preset name")
    parser.add_argument("--out", default="runs", help="output directory (created if missing)")
    parser.add_argument("--seed", type=int, help="trial seed / ensemble base seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per estimator and level")
    parser.add_argument("--sigma-theta", type=parse_levels, metavar="DEG",
                        help="bearing noise std in degrees")
    parser.add_argument("--sigma-p", type=parse_levels, metavar="M",
                        help="observer position noise std in meters")
    parser.add_argument("--estimator", choices=("rtls", "plkf", "both"))
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", help="override one config entry (repeatable)")
    return parser


def parse_args(argv=None) -> RunSpec:
    ns = build_parser().parse_args(argv)
    req = RunSpec(ns.subcommand, ns.config, Path(ns.out), ns.seed, ns.trials,
                   ns.sigma_theta or [], ns.sigma_p or [], ns.estimator, list(ns.overrides))
    if req.seed is not None and req.seed < 0:
        raise UsageError("--seed must be non-negative")
    if req.trials is not None and req.trials < 1:
        raise UsageError("--trials must be at least 1")
    if req.subcommand != "sweep" and (len(req.sigma_theta_deg) > 1 or len(req.sigma_p) > 1):
        raise UsageError("noise level lists are only allowed with `sweep`")
    if any(v < 0 for v in req.sigma_theta_deg + req.sigma_p):
        raise UsageError("noise levels must be non-negative")
    return req


def resolve(req: RunSpec) -> RunConfig:
    overrides = list(req.overrides)
    if req.seed is not None:
        overrides.append(f"noise.seed={req.seed}")
    if req.trials is not None:
        overrides.append(f"run.trials={req.trials}")
    if req.estimator is not None:
        overrides.append(f"run.estimator={req.estimator}")
    if len(req.sigma_theta_deg) == 1:
        overrides.append(f"noise.sigma_theta_deg={req.sigma_theta_deg[0]!r}")
    if len(req.sigma_p) == 1:
        overrides.append(f"noise.sigma_p={req.sigma_p[0]!r}")
    return load(req.config, overrides)


def _estimators(run: RunConfig) -> tuple[str, ...]:
    return ("rtls", "plkf") if run.estimator == "both" else (run.estimator,)


def _manifest(req: RunSpec, run: RunConfig, files, extra=()) -> list[tuple[str, str]]:
    entries = [("code_version", f"bearing_tma {__version__}"),
               ("subcommand", req.subcommand),
               ("config_file", str(req.config)),
               ("seed", str(run.trial.noise.seed))]
    entries += list(extra)
    entries += run.flat()
    entries.append(("files", ", ".join(sorted(files))))
    return entries


def emit_outputs(req: RunSpec, run: RunConfig, results) -> list[Path]:
    """Write CSVs, figures and ``manifest.txt`` into ``req.out``."""
    out = req.out
    if req.subcommand == "trial":
        records = results
        paths = [write_trial_csv(records, out / "trial.csv"),
                 plot_trajectory(records, out / "trajectory.svg", run.trial.circ.rho)]
        extra = [(f"trial_{i}", f"estimator={r.estimator} seed={r.seed} "
                  f"pivot_failures={r.pivot_failures}") for i, r in enumerate(records)]
    elif req.subcommand == "ensemble":
        summary = results
        paths = [write_summary_csv(summary, out / "summary.csv"),
                 write_final_errors_csv(summary, out / "final_errors.csv"),
                 plot_mean_errors(summary, out / "mean_error.svg", run.trial.dt)]
        extra = [("trials", str(summary.n_trials))]
        extra += [(f"pivot_failures.{e}", str(summary.pivot_failures[e])) for e in summary.estimators]
    else:
        sweep = results
        paths = [write_sweep_csv(sweep, out / "sweep.csv"), plot_sweep(sweep, out / "mse.svg")]
        extra = [("trials", str(sweep.summaries[0].n_trials)),
                 ("levels", "; ".join(f"({math.degrees(st):.6g} deg, {sp:.6g} m)"
                                      for st, sp in sweep.levels))]
    names = [p.name for p in paths] + ["manifest.txt"]
    paths.append(write_manifest(out / "manifest.txt", _manifest(req, run, names, extra)))
    return paths


def execute(req: RunSpec, run: RunConfig):
    cfg = run.trial
    ests = _estimators(run)
    seed = cfg.noise.seed
    if req.subcommand == "trial":
        return [run_trial(replace(cfg, estimator=e), trial=i) for i, e in enumerate(ests)]
    workers = default_workers()
    if req.subcommand == "ensemble":
        return run_monte_carlo(cfg, run.trials, seed, ests, workers)
    thetas = req.sigma_theta_deg or [math.degrees(cfg.noise.sigma_theta)]
    sps = req.sigma_p or [cfg.noise.sigma_p]
    levels = [(math.radians(t), p) for t, p in itertools.product(thetas, sps)]
    return run_noise_sweep(cfg, levels, run.trials, seed, ests, workers)


def main(argv=None) -> int:
    try:
        req = parse_args(argv)
        run = resolve(req)
    except SystemExit as err:
        return int(err.code or 0)
    except (UsageError, ConfigError) as err:
        print(f"tma: error: {err}", file=sys.stderr)
        return 2
    try:
        req.out.mkdir(parents=True, exist_ok=True)
        if not os.access(req.out, os.W_OK):
            raise PermissionError(f"output directory {req.out} is not writable")
    except OSError as err:
        print(f"tma: error: {err}", file=sys.stderr)
        return 1
    results = execute(req, run)
    try:
        paths = emit_outputs(req, run, results)
    except OSError as err:
        print(f"tma: error: cannot write outputs: {err}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
