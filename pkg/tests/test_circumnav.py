import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bearing_tma import CircumnavConfig, bearing_directions, control

finite = st.floats(-1e3, 1e3, allow_nan=False)
angle = st.floats(-math.pi, math.pi)


def test_on_orbit_is_pure_tangential():
    cfg = CircumnavConfig(rho=5, alpha=5, u_f_max=2)
    theta = 0.3
    p_o = np.array([1.0, 1.0])
    p_hat = p_o + 5 * np.array([math.cos(theta), math.sin(theta)])
    u = control(p_hat, p_o, theta, cfg)
    np.testing.assert_allclose(u, 5 * np.array([math.sin(theta), -math.cos(theta)]), atol=1e-12)


def test_reference_geometry_example():
    cfg = CircumnavConfig(rho=5, alpha=5, u_f_max=2)
    theta = math.atan2(4, 9)
    u = control([10, 5], [1, 1], theta, cfg)
    # radial 2*(9,4)/sqrt97 plus tangential 5*(4,-9)/sqrt97
    np.testing.assert_allclose(u, np.array([38.0, -37.0]) / math.sqrt(97), rtol=1e-14)
    np.testing.assert_allclose(u, [3.858319, -3.756782], atol=1e-5)


def test_unsaturated_radial_term_passes_through():
    cfg = CircumnavConfig(rho=5, alpha=1, u_f_max=2)
    theta = 1.1
    g = np.array([math.cos(theta), math.sin(theta)])
    u = control(6 * g, [0, 0], theta, cfg)
    assert u @ g == pytest.approx(1.0)
    inside = control(3 * g, [0, 0], theta, cfg)
    # observer too close: move away at the capped speed
    assert inside @ g == pytest.approx(-2.0)


@given(finite, finite, finite, finite, angle,
       st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100))
def test_speed_bound(px, py, ox, oy, theta, rho, alpha, uf):
    cfg = CircumnavConfig(rho, alpha, uf)
    u = control([px, py], [ox, oy], theta, cfg)
    assert math.hypot(*u) <= cfg.u_bound


@given(finite, finite, finite, finite, angle, finite, finite)
def test_translation_invariance(px, py, ox, oy, theta, cx, cy):
    cfg = CircumnavConfig()
    a = control([px, py], [ox, oy], theta, cfg)
    b = control([px + cx, py + cy], [ox + cx, oy + cy], theta, cfg)
    np.testing.assert_allclose(a, b, atol=1e-9 * (1 + abs(px) + abs(py) + abs(ox) + abs(oy) + abs(cx) + abs(cy)))


def test_config_validation():
    with pytest.raises(ValueError):
        CircumnavConfig(rho=0)
    assert CircumnavConfig(5, 5, 2).u_bound == 7


def test_bearing_directions_scalar_and_batch():
    g, gp = bearing_directions(0.3)
    np.testing.assert_allclose(g, [math.cos(0.3), math.sin(0.3)])
    np.testing.assert_allclose(gp, [math.sin(0.3), -math.cos(0.3)])
    G, GP = bearing_directions(np.array([0.3, -2.0]))
    assert G.shape == GP.shape == (2, 2)
    np.testing.assert_array_equal(G[0], g)
