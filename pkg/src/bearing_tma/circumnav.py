"""Bounded-input circumnavigation law.

The observer is pulled radially toward a circle of radius ``rho`` around the
estimated target (radial speed capped at ``u_f_max``) while a constant
tangential term ``alpha`` keeps it orbiting. The tangential direction
``[sin, -cos]`` makes the orbit clockwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CircumnavConfig:
    rho: float = 5.0
    alpha: float = 5.0
    u_f_max: float = 2.0

    def __post_init__(self):
        if not (self.rho > 0 and self.alpha > 0 and self.u_f_max > 0):
            raise ValueError("rho, alpha and u_f_max must all be positive")

    @property
    def u_bound(self) -> float:
        """Worst-case speed ``u_f_max + alpha`` the observer must support."""
        return self.u_f_max + self.alpha


def bearing_directions(theta_m) -> tuple[np.ndarray, np.ndarray]:
    """Unit line-of-sight ``g = [cos, sin]`` and its clockwise normal ``[sin, -cos]``.

    ``theta_m`` may be an array of shape ``(n,)``, giving ``(n, 2)`` outputs.
    """
    c, s = np.cos(theta_m), np.sin(theta_m)
    return np.stack([c, s], axis=-1), np.stack([s, -c], axis=-1)


def control(p_hat, p_o_m, theta_m: float, cfg: CircumnavConfig) -> np.ndarray:
    """Velocity command for the observer.

    Args:
        p_hat: estimated target position.
        p_o_m: measured observer position.
        theta_m: measured bearing, which sets both unit directions.
        cfg: gains and radial bound.

    Returns:
        The 2-vector ``u`` with ``||u|| <= cfg.u_f_max + cfg.alpha``.
    """
    c, s = math.cos(theta_m), math.sin(theta_m)
    dist = math.hypot(float(p_hat[0]) - float(p_o_m[0]), float(p_hat[1]) - float(p_o_m[1]))
    gain = dist - cfg.rho
    # |u_f| = |gain| since the bearing direction is a unit vector
    mag = abs(gain)
    if mag > cfg.u_f_max:
        gain *= cfg.u_f_max / mag
    return np.array([gain * c + cfg.alpha * s, gain * s - cfg.alpha * c])
