"""Pseudo-linear measurement rows.

A bearing ``theta`` from observer ``p_o`` to target ``p`` satisfies
``[sin theta, -cos theta] . p_o = [sin theta, -cos theta] . p``, which is
linear in the TMA parameters once ``p = M_k x``. With noisy inputs both
sides of that relation are perturbed, giving an errors-in-variables row
``(y, h)`` whose first-order noise covariances are computed here.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import NoiseConfig, SimClock


@dataclass(frozen=True, eq=False)
class PseudoRow:
    """One pseudo-linear measurement and its noise model.

    Attributes:
        y: scalar observation [m].
        h: regressor row, length 4.
        r_y: variance of ``y`` [m^2].
        R_h: 4x4 covariance of the perturbation of ``h`` (rank <= 1).
        k: step index the row belongs to.
    """

    y: float
    h: np.ndarray
    r_y: float
    R_h: np.ndarray
    k: int = 0
    z: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float).reshape(4)
        R_h = np.asarray(self.R_h, dtype=float).reshape(4, 4)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "R_h", R_h)
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "r_y", float(self.r_y))
        object.__setattr__(self, "z", np.append(h, self.y))


def basis_M(clock: SimClock) -> np.ndarray:
    """The 2x4 map ``[I, k*dt*I]`` taking ``x`` to the position at step k."""
    tk = clock.k * clock.dt
    return np.array([[1.0, 0.0, tk, 0.0],
                     [0.0, 1.0, 0.0, tk]])


def build_row(theta_m: float, p_o_m, clock: SimClock) -> tuple[float, np.ndarray]:
    """Return ``(y, h)`` for a measured bearing and observer position."""
    s, c = np.sin(theta_m), np.cos(theta_m)
    tk = clock.k * clock.dt
    y = s * float(p_o_m[0]) - c * float(p_o_m[1])
    h = np.array([s, -c, tk * s, -tk * c])
    return float(y), h


def row_covariances(theta_m: float, p_o_m, clock: SimClock,
                    noise: NoiseConfig) -> tuple[float, np.ndarray]:
    """First-order variance of ``y`` and covariance of ``h``.

    The measured bearing stands in for the unknown true one. ``R_h`` carries
    the ``sigma_theta**2`` factor since the perturbation of ``h`` is linear in
    the bearing error.
    """
    s, c = np.sin(theta_m), np.cos(theta_m)
    tk = clock.k * clock.dt
    var_t = noise.sigma_theta ** 2
    proj = c * float(p_o_m[0]) + s * float(p_o_m[1])
    r_y = proj * proj * var_t + noise.sigma_p ** 2
    a = np.array([c, s, tk * c, tk * s])
    R_h = var_t * np.outer(a, a)
    return float(r_y), R_h


def make_row(theta_m: float, p_o_m, clock: SimClock, noise: NoiseConfig) -> PseudoRow:
    """Build a complete :class:`PseudoRow` for one step."""
    y, h = build_row(theta_m, p_o_m, clock)
    r_y, R_h = row_covariances(theta_m, p_o_m, clock, noise)
    return PseudoRow(y, h, r_y, R_h, clock.k)
