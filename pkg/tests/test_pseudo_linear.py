import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bearing_tma import (NoiseConfig, SimClock, TmaParams, basis_M, build_row, make_row,
                         row_covariances, target_position, true_bearing)

SQ97 = math.sqrt(97.0)


def test_basis_M():
    np.testing.assert_array_equal(basis_M(SimClock(0, 0.1)), [[1, 0, 0, 0], [0, 1, 0, 0]])
    np.testing.assert_allclose(basis_M(SimClock(10, 0.1)), [[1, 0, 1, 0], [0, 1, 0, 1]], atol=1e-15)


@given(st.lists(st.floats(-100, 100), min_size=4, max_size=4), st.integers(0, 2000))
def test_basis_M_matches_target_position(xv, k):
    x = TmaParams.from_vector(xv)
    clock = SimClock(k, 0.1)
    np.testing.assert_allclose(basis_M(clock) @ x.as_vector(), target_position(x, clock),
                               rtol=1e-12, atol=1e-9)


def test_build_row_examples():
    y, h = build_row(math.pi / 2, [1, 1], SimClock(0, 0.1))
    assert y == pytest.approx(1.0)
    np.testing.assert_allclose(h, [1, 0, 0, 0], atol=1e-15)

    # bearing from [1,1] to [10,5]: sin = 4/sqrt(97), cos = 9/sqrt(97)
    theta = math.atan2(4, 9)
    y, h = build_row(theta, [1, 1], SimClock(0, 0.1))
    assert y == pytest.approx(-5 / SQ97, abs=1e-14)
    np.testing.assert_allclose(h, [4 / SQ97, -9 / SQ97, 0, 0], atol=1e-14)
    np.testing.assert_allclose(h, [0.406139, -0.913812, 0, 0], atol=1e-6)
    assert h @ [10, 5, 1, 1] == pytest.approx(y, abs=1e-14)


@given(st.lists(st.floats(-50, 50), min_size=4, max_size=4),
       st.floats(-50, 50), st.floats(-50, 50), st.integers(0, 1000))
def test_noise_free_rows_are_consistent(xv, ox, oy, k):
    x = TmaParams.from_vector(xv)
    clock = SimClock(k, 0.1)
    p = target_position(x, clock)
    if math.hypot(p[0] - ox, p[1] - oy) < 1e-6:
        return
    y, h = build_row(true_bearing(p, [ox, oy]), [ox, oy], clock)
    scale = 1 + np.abs(xv).sum() * (1 + k * 0.1) + abs(ox) + abs(oy)
    assert abs(y - h @ x.as_vector()) < 1e-12 * scale
    assert h[2] == pytest.approx(k * 0.1 * h[0], abs=1e-15 * (1 + k))
    assert h[3] == pytest.approx(k * 0.1 * h[1], abs=1e-15 * (1 + k))


def test_row_covariance_examples():
    r_y, R_h = row_covariances(0.3, [4, -2], SimClock(5, 0.1), NoiseConfig(0.0, 0.2))
    assert r_y == pytest.approx(0.04)
    np.testing.assert_array_equal(R_h, np.zeros((4, 4)))

    r_y, _ = row_covariances(0.0, [2, 3], SimClock(0, 0.1), NoiseConfig(0.1, 0.0))
    assert r_y == pytest.approx(0.04)


@given(st.floats(-math.pi, math.pi), st.floats(-20, 20), st.floats(-20, 20),
       st.integers(0, 1000), st.floats(1e-4, 0.3), st.floats(0, 2))
def test_row_covariance_structure(theta, ox, oy, k, st_, sp):
    clock = SimClock(k, 0.1)
    r_y, R_h = row_covariances(theta, [ox, oy], clock, NoiseConfig(st_, sp))
    tk = k * 0.1
    np.testing.assert_allclose(R_h, R_h.T)
    assert np.trace(R_h) == pytest.approx(st_ ** 2 * (1 + tk ** 2), rel=1e-12)
    w = np.linalg.eigvalsh(R_h)
    assert w[0] > -1e-12 * w[-1]
    assert w[-2] <= 1e-12 * w[-1]
    assert r_y >= sp ** 2
    expected = (math.cos(theta) * ox + math.sin(theta) * oy) ** 2 * st_ ** 2 + sp ** 2
    assert r_y == pytest.approx(expected, rel=1e-12, abs=1e-300)


def sample_row_errors(theta, p_o, clock, st_, sp, n, rng):
    """Perturb the true inputs and return the induced (dy, dh) samples."""
    y0, h0 = build_row(theta, p_o, clock)
    th = theta + st_ * rng.standard_normal(n)
    po = np.asarray(p_o) + sp * rng.standard_normal((n, 2))
    s, c = np.sin(th), np.cos(th)
    y = s * po[:, 0] - c * po[:, 1]
    tk = clock.k * clock.dt
    h = np.column_stack([s, -c, tk * s, -tk * c])
    return y - y0, h - h0


def test_covariances_match_perturbation_sampling():
    rng = np.random.default_rng(7)
    st_, sp = math.radians(0.5), 0.05
    for _ in range(3):
        theta = rng.uniform(-math.pi, math.pi)
        p_o = rng.uniform(-10, 10, 2)
        clock = SimClock(int(rng.integers(0, 600)), 0.1)
        dy, dh = sample_row_errors(theta, p_o, clock, st_, sp, 100_000, rng)
        r_y, R_h = row_covariances(theta, p_o, clock, NoiseConfig(st_, sp))
        assert dy.var() == pytest.approx(r_y, rel=0.05)
        cov = np.cov(dh.T)
        assert np.linalg.norm(cov - R_h) / np.linalg.norm(R_h) < 0.05


def test_make_row_bundles_everything():
    clock = SimClock(12, 0.1)
    noise = NoiseConfig(0.02, 0.1)
    row = make_row(0.4, [1, 2], clock, noise)
    y, h = build_row(0.4, [1, 2], clock)
    r_y, R_h = row_covariances(0.4, [1, 2], clock, noise)
    assert row.y == y and row.r_y == r_y and row.k == 12
    np.testing.assert_array_equal(row.h, h)
    np.testing.assert_array_equal(row.R_h, R_h)
    np.testing.assert_array_equal(row.z, np.append(h, y))
