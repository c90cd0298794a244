"""Synthetic data generators shared by the estimator tests."""
import math

import numpy as np

from bearing_tma import NoiseConfig, SimClock, TmaParams, make_row, target_position, true_bearing
from bearing_tma.pseudo_linear import PseudoRow


def eiv_batch(seed, n=200, sigma=0.1, cov=None):
    """Consistent rows ``[H, Hx]`` plus homogeneous noise with covariance ``sigma^2 cov``."""
    rng = np.random.default_rng(seed)
    x = 2 * rng.normal(size=4)
    H = 3 * rng.normal(size=(n, 4))
    Z = np.column_stack([H, H @ x])
    cov = np.eye(5) if cov is None else np.asarray(cov, float)
    L = np.linalg.cholesky(cov)
    return x, Z + sigma * rng.normal(size=(n, 5)) @ L.T, cov


def rows_from_matrix(Z, cov):
    return [PseudoRow(z[4], z[:4], cov[4, 4], cov[:4, :4], k) for k, z in enumerate(Z)]


def orbit_rows(seed, sigma_theta, n=200, dt=0.1, target=(30.0, 20.0, -1.0, 0.5),
               radius=10.0, omega=0.5):
    """Bearings from an observer circling the origin to a constant-velocity target.

    Returns the truth, the noisy rows and the exact mean 5x5 row-error
    covariance (bearing noise only, cross terms included).
    """
    rng = np.random.default_rng(seed)
    x = TmaParams.from_vector(target)
    noise = NoiseConfig(sigma_theta, 0.0)
    rows, D = [], np.zeros((5, 5))
    for k in range(n):
        clock = SimClock(k, dt)
        p = target_position(x, clock)
        tk = k * dt
        po = radius * np.array([math.cos(omega * tk), math.sin(omega * tk)])
        theta = true_bearing(p, po)
        c, s = math.cos(theta), math.sin(theta)
        b = np.array([c, s, tk * c, tk * s, c * po[0] + s * po[1]])
        D += sigma_theta ** 2 * np.outer(b, b) / n
        rows.append(make_row(theta + sigma_theta * rng.standard_normal(), po, clock, noise))
    return x, rows, D
