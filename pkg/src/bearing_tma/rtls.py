"""Recursive generalized total least squares with exponential forgetting.

The estimator keeps ``P``, the inverse of the exponentially weighted
correlation matrix of augmented rows ``z = [h, y]``, and refines the
augmented parameter vector ``[x; -1]`` by one generalized inverse-iteration
step per measurement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .exceptions import InvalidWeightError, PivotDegenerateError
from .model import SimClock
from .pseudo_linear import PseudoRow, basis_M


@dataclass(frozen=True)
class RtlsConfig:
    """Tuning for :func:`rtls_update`.

    Attributes:
        lam: forgetting factor in (0, 1].
        p0_scale: initial ``P = p0_scale * I``.
        reg_epsilon: Tikhonov term added to ``R_h``. ``None`` scales it to
            ``reg_rel * trace(R_h)`` for each row.
        reg_rel: relative regularizer used when ``reg_epsilon`` is None.
        var_floor: variance added to every diagonal entry of the row
            covariance so that noise-free rows still get a usable weight.
        pivot_tol: minimum ``|v[4]|`` accepted before dividing.
        weighting: ``"covariance"`` multiplies by the row covariance in the
            inverse-iteration step, which makes the fixed point coincide with
            batch GTLS under weight ``W = covariance^-1``. ``"inverse"``
            multiplies by the inverse covariance instead.
    """

    lam: float = 0.999
    p0_scale: float = 100.0
    reg_epsilon: Optional[float] = None
    reg_rel: float = 1e-6
    var_floor: float = 1e-12
    pivot_tol: float = 1e-12
    weighting: Literal["covariance", "inverse"] = "covariance"

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise ValueError(f"lam must lie in (0, 1], got {self.lam}")
        if not self.p0_scale > 0:
            raise ValueError("p0_scale must be positive")
        if self.reg_epsilon is not None and self.reg_epsilon < 0:
            raise ValueError("reg_epsilon must be non-negative")
        if self.reg_rel < 0 or self.var_floor < 0:
            raise ValueError("reg_rel and var_floor must be non-negative")
        if not self.pivot_tol > 0:
            raise ValueError("pivot_tol must be positive")
        if self.weighting not in ("covariance", "inverse"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass(frozen=True, eq=False)
class RtlsState:
    x_hat: np.ndarray
    P: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, RtlsState):
            return NotImplemented
        return bool(np.array_equal(self.x_hat, other.x_hat) and np.array_equal(self.P, other.P))


def rtls_init(cfg: RtlsConfig = RtlsConfig()) -> RtlsState:
    return RtlsState(np.zeros(4), cfg.p0_scale * np.eye(5))


def _h_block(R_h: np.ndarray, cfg: RtlsConfig) -> np.ndarray:
    eps = cfg.reg_epsilon
    if eps is None:
        eps = cfg.reg_rel * float(np.trace(R_h))
    return R_h + (eps + cfg.var_floor) * np.eye(4)


def row_weight(row: PseudoRow, cfg: RtlsConfig) -> np.ndarray:
    """The 5x5 block-diagonal matrix applied to ``[x_hat; -1]``.

    Raises:
        InvalidWeightError: on a negative ``r_y``, or, in ``"inverse"`` mode,
            when either block cannot be inverted.
    """
    if not row.r_y >= 0:
        raise InvalidWeightError(f"r_y must be non-negative, got {row.r_y}")
    r_y = row.r_y + cfg.var_floor
    Rh = _h_block(row.R_h, cfg)
    W = np.zeros((5, 5))
    if cfg.weighting == "covariance":
        W[:4, :4] = Rh
        W[4, 4] = r_y
        return W
    if r_y <= 0:
        raise InvalidWeightError("r_y is zero; cannot form its inverse")
    # R_h is rank one, so the regularizer alone must carry the smallest eigenvalue
    w, V = np.linalg.eigh(Rh)
    if not w[0] > np.finfo(float).eps * abs(w[-1]):
        raise InvalidWeightError("R_h + reg_epsilon*I is singular; raise reg_epsilon or var_floor")
    W[:4, :4] = (V / w) @ V.T
    W[4, 4] = 1.0 / r_y
    return W


def rtls_update(s: RtlsState, row: PseudoRow, cfg: RtlsConfig = RtlsConfig()) -> RtlsState:
    """Fold one pseudo-linear row into the estimate.

    Raises:
        InvalidWeightError: see :func:`row_weight`.
        PivotDegenerateError: if the last entry of the refined augmented
            vector falls below ``cfg.pivot_tol``. The error's ``state`` holds
            the advanced ``P`` with the previous estimate, so callers can keep
            going.
    """
    W = row_weight(row, cfg)
    z = row.z
    lam = cfg.lam
    P = s.P
    Pz = P @ z
    F = Pz / (lam + z @ Pz)
    P_new = (P - np.outer(F, z @ P)) / lam
    v = P_new @ (W @ np.append(s.x_hat, -1.0))
    if not abs(v[4]) >= cfg.pivot_tol:
        raise PivotDegenerateError(
            f"|v[4]| = {abs(v[4]):.3g} below pivot_tol at step {row.k}",
            state=RtlsState(s.x_hat, P_new),
        )
    return RtlsState(-v[:4] / v[4], P_new)


def rtls_recover(s: RtlsState, clock: SimClock) -> tuple[np.ndarray, np.ndarray]:
    """Current target position and velocity implied by the estimate."""
    return basis_M(clock) @ s.x_hat, s.x_hat[2:].copy()
