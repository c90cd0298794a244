import math

import numpy as np
import pytest

from bearing_tma import (EivBatch, InvalidWeightError, NoiseConfig, PivotDegenerateError,
                         RtlsConfig, SimClock, TmaParams, make_row, rtls_init, rtls_recover,
                         rtls_update, solve_gtls, target_position, true_bearing)
from bearing_tma.pseudo_linear import PseudoRow
from bearing_tma.rtls import RtlsState, row_weight

from synth import eiv_batch, rows_from_matrix

EXACT = RtlsConfig(lam=1.0, reg_epsilon=0.0, var_floor=0.0)


def test_init():
    s = rtls_init()
    np.testing.assert_array_equal(s.x_hat, np.zeros(4))
    np.testing.assert_array_equal(s.P, 100 * np.eye(5))
    np.testing.assert_array_equal(rtls_init(RtlsConfig(p0_scale=1.0)).P, np.eye(5))
    assert rtls_init() == rtls_init()
    assert RtlsConfig().lam == 0.999


@pytest.mark.parametrize("lam", [1.0, 0.999, 0.9])
@pytest.mark.parametrize("weighting", ["covariance", "inverse"])
def test_single_update_by_hand(lam, weighting):
    # z = [1,0,0,0,1]: theta=pi/2, k=0, observer at y=1 -> hand-propagating the
    # recursion from P0=100I gives x0 = 100/(lam+100), all else zero
    cfg = RtlsConfig(lam=lam, weighting=weighting)
    row = PseudoRow(1.0, [1, 0, 0, 0], 0.5, 0.1 * np.diag([1.0, 0, 0, 0]), 0)
    s = rtls_update(rtls_init(cfg), row, cfg)
    assert s.x_hat[0] == pytest.approx(100 / (lam + 100), rel=1e-12)
    np.testing.assert_array_equal(s.x_hat[1:], 0.0)


def test_update_matches_inverse_correlation():
    """P tracks the inverse of the forgetting-weighted correlation matrix."""
    rng = np.random.default_rng(1)
    cfg = RtlsConfig(lam=0.95, p0_scale=10.0)
    s = rtls_init(cfg)
    C = np.eye(5) / cfg.p0_scale
    for k in range(30):
        row = PseudoRow(rng.normal(), rng.normal(size=4), 1.0, np.eye(4), k)
        s = rtls_update(s, row, cfg)
        C = cfg.lam * C + np.outer(row.z, row.z)
    np.testing.assert_allclose(s.P, np.linalg.inv(C), rtol=1e-8, atol=1e-12)


def noise_free_rows(x, n, dt=0.1):
    noise = NoiseConfig(0.0, 0.0)
    rows = []
    for k in range(n):
        clock = SimClock(k, dt)
        p = target_position(x, clock)
        ang = 0.8 * k * dt
        po = p + 5 * np.array([math.cos(ang), math.sin(ang)]) + np.array([0.3 * k * dt, 0.0])
        rows.append(make_row(true_bearing(p, po), po, clock, noise))
    return rows


def test_noise_free_recovery_matches_direct_solve(reference_target):
    rows = noise_free_rows(reference_target, 40)
    H = np.array([r.h for r in rows])
    y = np.array([r.y for r in rows])
    direct = np.linalg.lstsq(H, y, rcond=None)[0]
    np.testing.assert_allclose(direct, reference_target.as_vector(), atol=1e-10)
    cfg = RtlsConfig(lam=1.0)
    s = rtls_init(cfg)
    for r in rows:
        s = rtls_update(s, r, cfg)
    assert np.linalg.norm(s.x_hat - direct) < 1e-6
    residual = y - H @ s.x_hat
    assert np.max(np.abs(residual)) < 1e-8


def test_guard_rejects_singular_weight():
    cfg = RtlsConfig(lam=1.0, reg_epsilon=0.0, var_floor=0.0, weighting="inverse")
    row = make_row(0.3, [1, 2], SimClock(4, 0.1), NoiseConfig(0.01, 0.1))
    with pytest.raises(InvalidWeightError):
        rtls_update(rtls_init(cfg), row, cfg)
    bad = PseudoRow(1.0, [1, 0, 0, 0], -1.0, np.eye(4), 0)
    with pytest.raises(InvalidWeightError):
        rtls_update(rtls_init(), bad, RtlsConfig())
    zero = PseudoRow(1.0, [1, 0, 0, 0], 0.0, np.eye(4), 0)
    with pytest.raises(InvalidWeightError):
        row_weight(zero, cfg)


def test_default_regularizer_scales_with_trace():
    row = make_row(0.3, [1, 2], SimClock(40, 0.1), NoiseConfig(0.02, 0.1))
    cfg = RtlsConfig(weighting="inverse", var_floor=0.0)
    W = row_weight(row, cfg)
    eps = 1e-6 * 0.02 ** 2 * (1 + 4.0 ** 2)
    np.testing.assert_allclose(W[:4, :4], np.linalg.inv(row.R_h + eps * np.eye(4)), rtol=1e-6)
    assert W[4, 4] == pytest.approx(1 / row.r_y)
    Wc = row_weight(row, RtlsConfig(var_floor=0.0))
    np.testing.assert_allclose(Wc[:4, :4], row.R_h + eps * np.eye(4), rtol=1e-12)


def test_pivot_guard_keeps_estimate_and_advances_P():
    cfg = RtlsConfig(pivot_tol=1e30)
    s0 = RtlsState(np.array([1.0, 2, 3, 4]), 100 * np.eye(5))
    row = PseudoRow(1.0, [1, 0, 0, 0], 0.5, np.zeros((4, 4)), 0)
    with pytest.raises(PivotDegenerateError) as info:
        rtls_update(s0, row, cfg)
    held = info.value.state
    np.testing.assert_array_equal(held.x_hat, s0.x_hat)
    assert not np.array_equal(held.P, s0.P)


def test_recover():
    s = RtlsState(np.array([10.0, 5, 1, 1]), np.eye(5))
    p, v = rtls_recover(s, SimClock(10, 0.1))
    np.testing.assert_allclose(p, [11, 6], atol=1e-14)
    np.testing.assert_array_equal(v, [1, 1])
    p0, _ = rtls_recover(s, SimClock(0, 0.1))
    np.testing.assert_array_equal(p0, [10, 5])
    _, v_late = rtls_recover(s, SimClock(999, 0.1))
    np.testing.assert_array_equal(v_late, v)


@pytest.mark.parametrize("seed", range(5))
def test_converges_to_unweighted_tls(seed):
    x, Z, cov = eiv_batch(seed, n=50, sigma=0.05)
    s = rtls_init(EXACT)
    for row in rows_from_matrix(Z, cov):
        s = rtls_update(s, row, EXACT)
        assert np.all(np.isfinite(s.P)) and np.all(np.isfinite(s.x_hat))
    g = solve_gtls(EivBatch(Z))
    np.testing.assert_allclose(s.x_hat, g, rtol=1e-2)


def test_covariance_weighting_reaches_weighted_gtls():
    """With a fixed non-identity row covariance D, only multiplying by D in the
    iteration lands on the batch GTLS solution for weight W = D^-1."""
    D = np.diag([1.0, 4.0, 0.25, 2.0, 9.0])
    cov_err, inv_err = [], []
    for seed in range(10):
        x, Z, _ = eiv_batch(seed, cov=D)
        g = solve_gtls(EivBatch(Z, None, np.linalg.inv(D)))
        for weighting, errs in (("covariance", cov_err), ("inverse", inv_err)):
            cfg = RtlsConfig(lam=1.0, reg_epsilon=0.0, var_floor=0.0, weighting=weighting)
            s = rtls_init(cfg)
            for row in rows_from_matrix(Z, D):
                s = rtls_update(s, row, cfg)
            errs.append(np.max(np.abs(s.x_hat - g) / np.abs(g)))
    assert max(cov_err) < 1e-3
    assert max(inv_err) > 1e-2


def test_determinism():
    x, Z, cov = eiv_batch(3, n=30)
    rows = rows_from_matrix(Z, cov)
    runs = []
    for _ in range(2):
        s, seq = rtls_init(), []
        for r in rows:
            s = rtls_update(s, r)
            seq.append(s)
        runs.append(seq)
    assert all(a == b for a, b in zip(*runs))


def test_config_validation():
    for bad in (dict(lam=0.0), dict(lam=1.1), dict(p0_scale=0), dict(reg_epsilon=-1),
                dict(pivot_tol=0), dict(weighting="nope")):
        with pytest.raises(ValueError):
            RtlsConfig(**bad)
