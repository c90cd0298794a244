"""Pseudo-linear Kalman filter baseline.

The state is the target's *current* position and velocity. Each bearing
gives the scalar pseudo-measurement ``[sin, -cos] . p_o = [sin, -cos] . p``
whose noise variance is approximated with the estimated target range,
``d_hat**2 * sigma_theta**2 + sigma_p**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import NoiseConfig

# eigenvalue floor applied after each covariance update
_PSD_FLOOR = 0.0
_RANGE_EPS = 1e-12


@dataclass(frozen=True)
class PlkfConfig:
    """Process noise ``q`` (added as ``q*I``) and the zero-range fallback."""

    q: float = 1e-4
    r_eps: float = 1e-12

    def __post_init__(self):
        if self.q < 0 or self.r_eps <= 0:
            raise ValueError("q must be >= 0 and r_eps > 0")


@dataclass(frozen=True, eq=False)
class PlkfState:
    x_hat: np.ndarray
    P: np.ndarray

    @property
    def p_hat(self) -> np.ndarray:
        return self.x_hat[:2]

    @property
    def v_hat(self) -> np.ndarray:
        return self.x_hat[2:]

    def __eq__(self, other):
        if not isinstance(other, PlkfState):
            return NotImplemented
        return bool(np.array_equal(self.x_hat, other.x_hat) and np.array_equal(self.P, other.P))


def plkf_init(p_guess=(0.0, 0.0), v_guess=(0.0, 0.0), p_var: float = 100.0) -> PlkfState:
    if not p_var > 0:
        raise ValueError("p_var must be positive")
    x = np.concatenate([np.asarray(p_guess, float).reshape(2), np.asarray(v_guess, float).reshape(2)])
    return PlkfState(x, p_var * np.eye(4))


def transition(dt: float) -> np.ndarray:
    F = np.eye(4)
    F[0, 2] = F[1, 3] = dt
    return F


def _psd(P: np.ndarray) -> np.ndarray:
    P = 0.5 * (P + P.T)
    w, V = np.linalg.eigh(P)
    if w[0] >= _PSD_FLOOR:
        return P
    return (V * np.maximum(w, _PSD_FLOOR)) @ V.T


def plkf_predict(s: PlkfState, dt: float, cfg: PlkfConfig = PlkfConfig()) -> PlkfState:
    """Constant-velocity prediction over ``dt`` seconds."""
    F = transition(dt)
    return PlkfState(F @ s.x_hat, F @ s.P @ F.T + cfg.q * np.eye(4))


def measurement_variance(d_hat: float, noise: NoiseConfig, cfg: PlkfConfig = PlkfConfig()) -> float:
    """Pseudo-measurement variance with the estimated range in place of the true one."""
    if d_hat <= _RANGE_EPS:
        return noise.sigma_p ** 2 + cfg.r_eps
    return d_hat * d_hat * noise.sigma_theta ** 2 + noise.sigma_p ** 2


def plkf_update(s: PlkfState, theta_m: float, p_o_m, noise: NoiseConfig,
                cfg: PlkfConfig = PlkfConfig()) -> PlkfState:
    """Joseph-form update with one bearing and one self-localization fix."""
    sn, cs = np.sin(theta_m), np.cos(theta_m)
    c = np.array([sn, -cs, 0.0, 0.0])
    z = sn * float(p_o_m[0]) - cs * float(p_o_m[1])
    d_hat = float(np.hypot(s.x_hat[0] - p_o_m[0], s.x_hat[1] - p_o_m[1]))
    R = measurement_variance(d_hat, noise, cfg)
    Pc = s.P @ c
    S = c @ Pc + R
    if not S > 0:
        # zero prior uncertainty along c and a noise-free measurement
        return s
    K = Pc / S
    x = s.x_hat + K * (z - c @ s.x_hat)
    IKH = np.eye(4) - np.outer(K, c)
    P = IKH @ s.P @ IKH.T + R * np.outer(K, K)
    return PlkfState(x, _psd(P))


def initial_condition(s: PlkfState, t: float) -> np.ndarray:
    """Back-propagate the current estimate to ``[p0; v0]`` at time zero."""
    return np.concatenate([s.x_hat[:2] - t * s.x_hat[2:], s.x_hat[2:]])
