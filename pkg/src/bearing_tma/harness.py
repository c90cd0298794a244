"""Closed-loop trials, Monte Carlo ensembles and noise sweeps.

Every trial follows the same loop: advance the target, take noisy bearing
and self-localization measurements, update the estimator, compute the
circumnavigation command from the *measured* quantities and the estimate,
saturate it and move the observer. Estimators and controller never see
ground truth (except the controller, when ``control_source="truth"`` is
requested explicitly for controller-only experiments).

Position MSE for a trial is the mean of ``e_p**2`` over the final 20% of
steps; ensemble MSE averages that over trials.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

from .circumnav import CircumnavConfig, control
from .exceptions import PivotDegenerateError
from .model import (NoiseConfig, NoiseStreams, ObserverState, SimClock, TmaParams,
                    measure_bearing, measure_observer_position, observer_step,
                    saturate, target_position, true_bearing)
from .plkf import PlkfConfig, initial_condition, plkf_init, plkf_predict, plkf_update
from .pseudo_linear import make_row
from .rtls import RtlsConfig, rtls_init, rtls_recover, rtls_update

ESTIMATORS = ("rtls", "plkf")
MSE_WINDOW = 0.2

TRIAL_COLUMNS = ("trial", "k", "t", "px", "py", "vx", "vy", "px_hat", "py_hat", "vx_hat",
                 "vy_hat", "e_p", "e_v", "e_s", "theta", "theta_m", "pox", "poy", "pox_m",
                 "poy_m", "ux", "uy")
_COL = {name: i for i, name in enumerate(TRIAL_COLUMNS)}


@dataclass(frozen=True)
class TrialConfig:
    """Everything needed to run one closed-loop trial.

    ``u_max`` defaults to the controller's worst-case speed. The PLKF prior
    variance is tied to ``rtls.p0_scale`` and both estimators start from the
    zero guess.
    """

    x_true: TmaParams = field(default_factory=lambda: TmaParams([10.0, 5.0], [1.0, 1.0]))
    p_o_init: tuple = (1.0, 1.0)
    dt: float = 0.1
    n_steps: int = 600
    noise: NoiseConfig = NoiseConfig(math.radians(1.0), 0.1, 0)
    rtls: RtlsConfig = RtlsConfig()
    plkf: PlkfConfig = PlkfConfig()
    circ: CircumnavConfig = CircumnavConfig()
    u_max: float | None = None
    estimator: Literal["rtls", "plkf"] = "rtls"
    control_source: Literal["estimate", "truth"] = "estimate"

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"unknown estimator {self.estimator!r}")
        if self.control_source not in ("estimate", "truth"):
            raise ValueError(f"unknown control_source {self.control_source!r}")
        if self.u_max is not None and self.u_max < self.circ.u_bound:
            raise ValueError(f"u_max={self.u_max} is below the controller bound {self.circ.u_bound}")
        object.__setattr__(self, "p_o_init", tuple(float(v) for v in self.p_o_init))

    @property
    def speed_limit(self) -> float:
        return self.circ.u_bound if self.u_max is None else self.u_max

    def with_noise(self, **kw) -> "TrialConfig":
        return replace(self, noise=replace(self.noise, **kw))


class RtlsTracker:
    """Pseudo-linear rows fed through the recursive TLS estimator."""

    def __init__(self, cfg: RtlsConfig, noise: NoiseConfig):
        self.cfg = cfg
        self.noise = noise
        self.state = rtls_init(cfg)
        self.pivot_failures = 0

    def step(self, theta_m, p_o_m, clock):
        row = make_row(theta_m, p_o_m, clock, self.noise)
        try:
            self.state = rtls_update(self.state, row, self.cfg)
        except PivotDegenerateError as err:
            self.state = err.state
            self.pivot_failures += 1
        p_hat, v_hat = rtls_recover(self.state, clock)
        return p_hat, v_hat, self.state.x_hat.copy()


class PlkfTracker:
    """Current-state PLKF; reports the back-propagated initial condition too."""

    def __init__(self, cfg: PlkfConfig, noise: NoiseConfig, p_var: float):
        self.cfg = cfg
        self.noise = noise
        self.state = plkf_init((0.0, 0.0), (0.0, 0.0), p_var)
        self.pivot_failures = 0
        self._last_k = None

    def step(self, theta_m, p_o_m, clock):
        if self._last_k is not None:
            self.state = plkf_predict(self.state, (clock.k - self._last_k) * clock.dt, self.cfg)
        self._last_k = clock.k
        self.state = plkf_update(self.state, theta_m, p_o_m, self.noise, self.cfg)
        x_hat = initial_condition(self.state, clock.t)
        return self.state.p_hat.copy(), self.state.v_hat.copy(), x_hat


def make_tracker(cfg: TrialConfig):
    if cfg.estimator == "rtls":
        return RtlsTracker(cfg.rtls, cfg.noise)
    return PlkfTracker(cfg.plkf, cfg.noise, cfg.rtls.p0_scale)


@dataclass(eq=False)
class TrialRecord:
    """Per-step log of one trial; ``data`` follows :data:`TRIAL_COLUMNS`."""

    data: np.ndarray
    estimator: str
    seed: int
    pivot_failures: int = 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, _COL[name]]

    def __len__(self):
        return self.data.shape[0]

    @property
    def trial(self) -> int:
        return int(self.data[0, 0])

    def position_mse(self, window: float = MSE_WINDOW) -> float:
        return window_mse(self["e_p"], window)

    def measurements(self) -> list[tuple[float, np.ndarray]]:
        """The ``(theta_m, p_o_m)`` stream the estimator consumed."""
        return [(row[_COL["theta_m"]], row[[_COL["pox_m"], _COL["poy_m"]]].copy()) for row in self.data]


def state_errors(p, v, x, p_hat, v_hat, x_hat) -> tuple[float, float, float]:
    """Position, velocity and TMA-parameter errors (Euclidean norms)."""
    e_p = math.hypot(p[0] - p_hat[0], p[1] - p_hat[1])
    e_v = math.hypot(v[0] - v_hat[0], v[1] - v_hat[1])
    return e_p, e_v, float(np.linalg.norm(np.asarray(x) - np.asarray(x_hat)))


def window_mse(e: np.ndarray, window: float = MSE_WINDOW) -> float:
    n = len(e)
    start = n - max(1, int(round(window * n)))
    return float(np.mean(np.square(e[start:])))


def run_trial(cfg: TrialConfig, trial: int = 0) -> TrialRecord:
    """Run one closed-loop trial and log every step."""
    noise = cfg.noise
    streams = NoiseStreams(noise.seed)
    tracker = make_tracker(cfg)
    obs = ObserverState(cfg.p_o_init, cfg.speed_limit)
    x_true = cfg.x_true.as_vector()
    out = np.empty((cfg.n_steps, len(TRIAL_COLUMNS)))
    for k in range(cfg.n_steps):
        clock = SimClock(k, cfg.dt)
        p = target_position(cfg.x_true, clock)
        v = cfg.x_true.v0
        theta = true_bearing(p, obs.p_o)
        theta_m = measure_bearing(theta, noise, streams.bearing)
        p_o_m = measure_observer_position(obs.p_o, noise, streams.observer_x, streams.observer_y)

        p_hat, v_hat, x_hat = tracker.step(theta_m, p_o_m, clock)

        aim = p if cfg.control_source == "truth" else p_hat
        u = saturate(control(aim, p_o_m, theta_m, cfg.circ), obs.u_max)

        e_p, e_v, e_s = state_errors(p, v, x_true, p_hat, v_hat, x_hat)
        out[k] = (trial, k, clock.t, p[0], p[1], v[0], v[1], p_hat[0], p_hat[1], v_hat[0],
                  v_hat[1], e_p, e_v, e_s, theta, theta_m, obs.p_o[0], obs.p_o[1],
                  p_o_m[0], p_o_m[1], u[0], u[1])
        obs = observer_step(obs, u, cfg.dt)
    return TrialRecord(out, cfg.estimator, noise.seed, tracker.pivot_failures)


@dataclass(eq=False)
class EnsembleSummary:
    """Aggregates over ``n_trials`` seeded trials, keyed by estimator name.

    ``mean_*`` hold per-step means across trials; ``final_*`` hold each
    trial's last-step error; ``trial_mse`` holds each trial's position MSE.
    """

    estimators: tuple
    n_trials: int
    base_seed: int
    mean_e_s: dict
    mean_e_p: dict
    mean_e_v: dict
    final_e_s: dict
    final_e_p: dict
    final_e_v: dict
    trial_mse: dict
    pivot_failures: dict

    @property
    def mse_pos(self) -> dict:
        return {est: float(np.mean(v)) for est, v in self.trial_mse.items()}


def _trial_errors(args):
    cfg, trial = args
    rec = run_trial(cfg, trial)
    return rec["e_s"].copy(), rec["e_p"].copy(), rec["e_v"].copy(), rec.pivot_failures


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TMA_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_monte_carlo(cfg: TrialConfig, n_trials: int, base_seed: int = 0,
                    estimators: Sequence[str] | None = None,
                    workers: int | None = None) -> EnsembleSummary:
    """Run trials with seeds ``base_seed .. base_seed + n_trials - 1``.

    Every estimator sees the same seeds. Results are reduced in trial order,
    so the summary does not depend on ``workers``.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    estimators = (cfg.estimator,) if estimators is None else tuple(estimators)
    for est in estimators:
        if est not in ESTIMATORS:
            raise ValueError(f"unknown estimator {est!r}")
    workers = default_workers() if workers is None else workers
    jobs = [(replace(cfg, estimator=est, noise=replace(cfg.noise, seed=base_seed + i)), i)
            for est in estimators for i in range(n_trials)]
    results = _map(_trial_errors, jobs, workers)

    fields = {name: {} for name in ("mean_e_s", "mean_e_p", "mean_e_v", "final_e_s",
                                    "final_e_p", "final_e_v", "trial_mse", "pivot_failures")}
    for j, est in enumerate(estimators):
        chunk = results[j * n_trials:(j + 1) * n_trials]
        es = np.array([r[0] for r in chunk])
        ep = np.array([r[1] for r in chunk])
        ev = np.array([r[2] for r in chunk])
        fields["mean_e_s"][est] = es.mean(axis=0)
        fields["mean_e_p"][est] = ep.mean(axis=0)
        fields["mean_e_v"][est] = ev.mean(axis=0)
        fields["final_e_s"][est] = es[:, -1].copy()
        fields["final_e_p"][est] = ep[:, -1].copy()
        fields["final_e_v"][est] = ev[:, -1].copy()
        fields["trial_mse"][est] = np.array([window_mse(e) for e in ep])
        fields["pivot_failures"][est] = int(sum(r[3] for r in chunk))
    return EnsembleSummary(estimators, n_trials, base_seed, **fields)


@dataclass(eq=False)
class SweepResult:
    """One :class:`EnsembleSummary` per ``(sigma_theta, sigma_p)`` level."""

    levels: list
    summaries: list

    def table(self) -> list[tuple[str, float, float, float]]:
        """Rows ``(estimator, sigma_theta_deg, sigma_p_m, mse_pos)``."""
        rows = []
        for est in self.summaries[0].estimators:
            for (st, sp), summ in zip(self.levels, self.summaries):
                rows.append((est, float(f"{math.degrees(st):.12g}"), sp, summ.mse_pos[est]))
        return rows

    def mse(self, estimator: str) -> np.ndarray:
        return np.array([s.mse_pos[estimator] for s in self.summaries])


def run_noise_sweep(cfg: TrialConfig, sweep: Sequence[tuple[float, float]], n_trials: int,
                    base_seed: int = 0, estimators: Sequence[str] | None = None,
                    workers: int | None = None) -> SweepResult:
    """Monte Carlo ensemble at each ``(sigma_theta [rad], sigma_p [m])`` level.

    All levels reuse the same seeds, so differences between levels come from
    the noise scale rather than from fresh draws.
    """
    if not sweep:
        raise ValueError("sweep must contain at least one level")
    levels = [(float(st), float(sp)) for st, sp in sweep]
    summaries = [run_monte_carlo(cfg.with_noise(sigma_theta=st, sigma_p=sp), n_trials,
                                 base_seed, estimators, workers) for st, sp in levels]
    return SweepResult(levels, summaries)
