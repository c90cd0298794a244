"""Dense batch solvers used as references for the recursive estimator.

Both solvers work on the augmented matrix ``Z = [H, y]``: weighted least
squares treats only ``y`` as noisy, generalized total least squares corrects
all of ``Z``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import NonUniqueSolutionError, PivotDegenerateError, RankDeficientError

TIE_RTOL = 1e-9
PIVOT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EivBatch:
    """Stacked rows plus left (per-row) and right (per-column) weights.

    ``Lambda`` may be given as the N forgetting weights or as the full
    diagonal matrix; ``W`` defaults to the identity.
    """

    Z: np.ndarray
    Lambda: np.ndarray | None = None
    W: np.ndarray | None = None

    def __post_init__(self):
        Z = np.atleast_2d(np.asarray(self.Z, dtype=float))
        n, m = Z.shape
        lam = np.ones(n) if self.Lambda is None else np.asarray(self.Lambda, dtype=float)
        if lam.ndim == 2:
            if not np.array_equal(lam, np.diag(np.diag(lam))):
                raise ValueError("Lambda must be diagonal")
            lam = np.diag(lam).copy()
        if lam.shape != (n,):
            raise ValueError(f"Lambda has {lam.size} weights for {n} rows")
        if np.any(lam <= 0) or np.any(lam > 1):
            raise ValueError("forgetting weights must lie in (0, 1]")
        W = np.eye(m) if self.W is None else np.asarray(self.W, dtype=float)
        if W.shape != (m, m) or not np.allclose(W, W.T):
            raise ValueError("W must be a symmetric matrix matching Z's columns")
        if np.linalg.eigvalsh(W)[0] <= 0:
            raise ValueError("W must be positive definite")
        if n < m:
            raise ValueError(f"need at least {m} rows, got {n}")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "Lambda", lam)
        object.__setattr__(self, "W", W)

    @property
    def H(self) -> np.ndarray:
        return self.Z[:, :-1]

    @property
    def y(self) -> np.ndarray:
        return self.Z[:, -1]

    @classmethod
    def from_rows(cls, rows, lam: float = 1.0, W=None) -> "EivBatch":
        """Stack pseudo-linear rows, weighting row i by ``lam**(N-1-i)``."""
        Z = np.array([r.z for r in rows])
        weights = lam ** np.arange(len(rows) - 1, -1, -1, dtype=float)
        return cls(Z, weights, W)


def sqrtm_psd(W: np.ndarray) -> np.ndarray:
    """Symmetric square root via eigendecomposition."""
    w, V = np.linalg.eigh(W)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def solve_gtls(b: EivBatch) -> np.ndarray:
    """Generalized TLS estimate.

    Minimizes ``||Lambda (Z - Zc) W^(1/2)||_F`` subject to ``Zc [x; -1] = 0``.
    The minimizer comes from the right singular vector of
    ``Lambda Z W^(1/2)`` with the smallest singular value, mapped back
    through ``W^(1/2)``.

    Raises:
        NonUniqueSolutionError: the two smallest singular values tie.
        PivotDegenerateError: the back-mapped vector has a ~zero last entry.
    """
    S = sqrtm_psd(b.W)
    A = b.Lambda[:, None] * b.Z @ S
    _, sv, Vt = np.linalg.svd(A, full_matrices=False)
    if sv[-2] - sv[-1] <= TIE_RTOL * sv[-2]:
        raise NonUniqueSolutionError(
            f"smallest singular values {sv[-2]:.6g}, {sv[-1]:.6g} are not separated")
    u = S @ Vt[-1]
    if abs(u[-1]) < PIVOT_TOL * np.linalg.norm(u):
        raise PivotDegenerateError("GTLS solution has no finite normalization")
    return -u[:-1] / u[-1]


def gtls_correction(b: EivBatch, x) -> float:
    """Smallest weighted Frobenius correction making ``[x; -1]`` a null vector.

    For a fixed ``x`` the optimal correction is rank one, so the objective
    reduces to ``||Lambda Z u|| / ||W^(-1/2) u||`` with ``u = [x; -1]``.
    """
    u = np.append(np.asarray(x, dtype=float), -1.0)
    S_inv = np.linalg.inv(sqrtm_psd(b.W))
    return float(np.linalg.norm(b.Lambda * (b.Z @ u)) / np.linalg.norm(S_inv @ u))


def solve_wls(b: EivBatch) -> np.ndarray:
    """Weighted least squares: minimize ``||Lambda^(1/2) (H x - y)||``.

    Raises:
        RankDeficientError: the weighted regressor lacks full column rank.
    """
    sw = np.sqrt(b.Lambda)
    A = sw[:, None] * b.H
    if np.linalg.matrix_rank(A) < A.shape[1]:
        raise RankDeficientError("weighted regressor matrix is rank deficient")
    x, *_ = np.linalg.lstsq(A, sw * b.y, rcond=None)
    return x
