"""CSV tables, SVG figures and run manifests.

Floats are written with ``repr`` (shortest round-trip decimal) so reruns
with the same seed reproduce files byte for byte.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .harness import TRIAL_COLUMNS, EnsembleSummary, SweepResult, TrialRecord

SUMMARY_COLUMNS = ("estimator", "k", "mean_e_s", "mean_e_p", "mean_e_v")
FINAL_COLUMNS = ("estimator", "trial", "seed", "e_s", "e_p", "e_v", "mse_pos")
SWEEP_COLUMNS = ("estimator", "sigma_theta_deg", "sigma_p_m", "mse_pos")
_INT_COLUMNS = {"trial", "k", "seed"}


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_rows(path: Path, header, rows) -> Path:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_trial_csv(records: list[TrialRecord], path) -> Path:
    int_idx = {i for i, c in enumerate(TRIAL_COLUMNS) if c in _INT_COLUMNS}

    def rows():
        for rec in records:
            for r in rec.data:
                yield [int(v) if i in int_idx else float(v) for i, v in enumerate(r)]
    return _write_rows(Path(path), TRIAL_COLUMNS, rows())


def write_summary_csv(summary: EnsembleSummary, path) -> Path:
    def rows():
        for est in summary.estimators:
            for k, (es, ep, ev) in enumerate(zip(summary.mean_e_s[est], summary.mean_e_p[est],
                                                 summary.mean_e_v[est])):
                yield est, k, es, ep, ev
    return _write_rows(Path(path), SUMMARY_COLUMNS, rows())


def write_final_errors_csv(summary: EnsembleSummary, path) -> Path:
    def rows():
        for est in summary.estimators:
            for i in range(summary.n_trials):
                yield (est, i, summary.base_seed + i, summary.final_e_s[est][i],
                       summary.final_e_p[est][i], summary.final_e_v[est][i],
                       summary.trial_mse[est][i])
    return _write_rows(Path(path), FINAL_COLUMNS, rows())


def write_sweep_csv(result: SweepResult, path) -> Path:
    return _write_rows(Path(path), SWEEP_COLUMNS, result.table())


def write_manifest(path, entries: list[tuple[str, str]]) -> Path:
    with open(path, "w", newline="\n") as fh:
        for key, val in entries:
            fh.write(f"{key} = {val}\n")
    return Path(path)


def _figure():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    # fixed element ids so repeated runs produce identical SVG text
    plt.rcParams["svg.hashsalt"] = "bearing_tma"
    return plt


def _save(fig, path) -> Path:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    import matplotlib.pyplot as plt
    plt.close(fig)
    return Path(path)


def plot_trajectory(records: list[TrialRecord], path, rho: float | None = None) -> Path:
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6, 6))
    rec0 = records[0]
    ax.plot(rec0["px"], rec0["py"], "k-", lw=1.5, label="target")
    ax.plot(rec0["px"][0], rec0["py"][0], "k*", ms=10)
    for rec in records:
        ax.plot(rec["pox"], rec["poy"], lw=0.8, label=f"observer ({rec.estimator})")
        ax.plot(rec["px_hat"], rec["py_hat"], ":", lw=0.8, label=f"estimate ({rec.estimator})")
    ax.plot(rec0["pox"][0], rec0["poy"][0], "o", color="tab:orange", ms=7)
    if rho is not None:
        t = np.linspace(0, 2 * math.pi, 200)
        ax.plot(rec0["px"][-1] + rho * np.cos(t), rec0["py"][-1] + rho * np.sin(t), "k--", lw=0.5)
    ax.set_aspect("equal", "datalim")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def plot_mean_errors(summary: EnsembleSummary, path, dt: float) -> Path:
    plt = _figure()
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for est in summary.estimators:
        t = np.arange(len(summary.mean_e_s[est])) * dt
        axes[0].semilogy(t, summary.mean_e_s[est], label=est.upper())
    axes[0].set_xlabel("time [s]")
    axes[0].set_ylabel(f"mean state error over {summary.n_trials} trials")
    axes[0].legend()
    axes[1].boxplot([summary.final_e_p[e] for e in summary.estimators])
    axes[1].set_xticks(range(1, len(summary.estimators) + 1),
                       [e.upper() for e in summary.estimators])
    axes[1].set_ylabel("final position error [m]")
    fig.tight_layout()
    return _save(fig, path)


def plot_sweep(result: SweepResult, path) -> Path:
    plt = _figure()
    thetas = sorted({st for st, _ in result.levels})
    sps = sorted({sp for _, sp in result.levels})
    vary_theta = len(thetas) >= len(sps)
    fig, ax = plt.subplots(figsize=(6, 4))
    for est in result.summaries[0].estimators:
        mse = result.mse(est)
        xs = [math.degrees(st) if vary_theta else sp for st, sp in result.levels]
        order = np.argsort(xs)
        ax.plot(np.asarray(xs)[order], mse[order], "o-", label=est.upper())
    if vary_theta:
        ax.set_xlabel("bearing noise std [deg]")
    else:
        ax.set_xlabel("observer position noise std [m]")
        ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_ylabel("position MSE [m^2]")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)
