"""Target and observer kinematics plus the noisy sensor models.

The target moves with constant velocity, so its whole trajectory is fixed by
the TMA parameter vector ``x = [p0_x, p0_y, v0_x, v0_y]``. The observer is a
first-order integrator with a speed bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateGeometryError, SaturationError

# slack on the speed bound so that a clamped input never trips the check
_SAT_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class TmaParams:
    """Initial position ``p0`` [m] and constant velocity ``v0`` [m/s]."""

    p0: np.ndarray
    v0: np.ndarray

    def __post_init__(self):
        p0 = np.array(self.p0, dtype=float).reshape(2)
        v0 = np.array(self.v0, dtype=float).reshape(2)
        if not (np.all(np.isfinite(p0)) and np.all(np.isfinite(v0))):
            raise ValueError("TmaParams entries must be finite")
        p0.flags.writeable = False
        v0.flags.writeable = False
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "v0", v0)

    @classmethod
    def from_vector(cls, x) -> "TmaParams":
        x = np.asarray(x, dtype=float).reshape(4)
        return cls(x[:2], x[2:])

    def as_vector(self) -> np.ndarray:
        """Flattened ``[p0_x, p0_y, v0_x, v0_y]``."""
        return np.concatenate([self.p0, self.v0])

    def __eq__(self, other):
        if not isinstance(other, TmaParams):
            return NotImplemented
        return bool(np.array_equal(self.as_vector(), other.as_vector()))

    def __repr__(self):
        return f"TmaParams(p0={self.p0.tolist()}, v0={self.v0.tolist()})"


@dataclass(frozen=True)
class SimClock:
    """Discrete time index ``k`` with sampling interval ``dt`` [s]."""

    k: int = 0
    dt: float = 0.1

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")

    @property
    def t(self) -> float:
        return self.k * self.dt

    def tick(self) -> "SimClock":
        return SimClock(self.k + 1, self.dt)


@dataclass(frozen=True, eq=False)
class ObserverState:
    """Observer position ``p_o`` [m] and its speed bound ``u_max`` [m/s]."""

    p_o: np.ndarray
    u_max: float

    def __post_init__(self):
        if not self.u_max > 0:
            raise ValueError(f"u_max must be positive, got {self.u_max}")
        p_o = np.array(self.p_o, dtype=float).reshape(2)
        p_o.flags.writeable = False
        object.__setattr__(self, "p_o", p_o)


@dataclass(frozen=True)
class NoiseConfig:
    """Bearing noise std [rad], self-localization noise std [m], trial seed."""

    sigma_theta: float = 0.0
    sigma_p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma_theta < 0 or self.sigma_p < 0:
            raise ValueError("noise standard deviations must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


class NoiseStreams:
    """Independent generators for each noise source, derived from one seed.

    Each source owns a child of the trial's ``SeedSequence`` so that turning
    one source on or off never shifts the draws of another.
    """

    _SOURCES = ("bearing", "observer_x", "observer_y")

    def __init__(self, seed: int):
        self.seed = int(seed)
        for i, name in enumerate(self._SOURCES):
            ss = np.random.SeedSequence(self.seed, spawn_key=(i,))
            setattr(self, name, np.random.default_rng(ss))


def wrap_angle(theta: float) -> float:
    """Wrap an angle to (-pi, pi]; in-range values come back untouched."""
    if -math.pi < theta <= math.pi:
        return theta
    r = math.remainder(theta, 2 * math.pi)
    return math.pi if r <= -math.pi else r


def target_position(x: TmaParams, clock: SimClock) -> np.ndarray:
    """Target position ``p0 + k*dt*v0`` at the clock's step."""
    return x.p0 + clock.k * clock.dt * x.v0


def target_velocity(x: TmaParams, clock: SimClock | None = None) -> np.ndarray:
    return x.v0.copy()


def observer_step(s: ObserverState, u, dt: float) -> ObserverState:
    """Advance the observer one step under control ``u``.

    Raises:
        SaturationError: if ``||u||`` exceeds ``s.u_max``; inputs must be
            saturated by the caller.
    """
    u = np.asarray(u, dtype=float).reshape(2)
    speed = float(np.hypot(u[0], u[1]))
    if speed > s.u_max * (1 + _SAT_RTOL):
        raise SaturationError(f"|u| = {speed:.6g} exceeds u_max = {s.u_max:.6g}")
    return ObserverState(s.p_o + dt * u, s.u_max)


def saturate(u, u_max: float) -> np.ndarray:
    """Rescale ``u`` onto the disc of radius ``u_max`` if it lies outside."""
    u = np.asarray(u, dtype=float)
    n = float(np.hypot(u[0], u[1]))
    if n > u_max:
        return u * (u_max / n)
    return u


def true_bearing(p, p_o) -> float:
    """Noiseless bearing from ``p_o`` to ``p`` in (-pi, pi]."""
    dx = float(p[0]) - float(p_o[0])
    dy = float(p[1]) - float(p_o[1])
    if dx == 0.0 and dy == 0.0:
        raise DegenerateGeometryError("target and observer positions coincide")
    theta = math.atan2(dy, dx)
    return math.pi if theta == -math.pi else theta


def measure_bearing(theta: float, noise: NoiseConfig, rng: np.random.Generator) -> float:
    """Add N(0, sigma_theta^2) noise from ``rng`` and wrap to (-pi, pi].

    One standard normal is always drawn so that streams stay aligned across
    noise levels.
    """
    mu = noise.sigma_theta * rng.standard_normal()
    return wrap_angle(theta + mu)


def measure_observer_position(p_o, noise: NoiseConfig, rng_x: np.random.Generator,
                              rng_y: np.random.Generator | None = None) -> np.ndarray:
    """Self-localization with independent N(0, sigma_p^2) error per axis.

    A single generator may be passed, in which case both axes draw from it.
    """
    rng_y = rng_x if rng_y is None else rng_y
    mu = np.array([rng_x.standard_normal(), rng_y.standard_normal()])
    return np.asarray(p_o, dtype=float) + noise.sigma_p * mu
