import numpy as np
import pytest

from genhelix.cylinderlab import (
    circular_normal_helix,
    generate_general_helix,
    generate_normal_helix,
    make_cylinder,
    normal_angle_profile,
    slope_and_theta,
)
from genhelix.curvegeom import circle, frenet_series, twisted_cubic
from genhelix.errors import DegenerateBase, NonPlanarBase, OffSurface, SlopeBlowup, ThetaZeroCrossing

from conftest import THETA


def test_generator_matches_closed_form(normal_helix):
    s, k = normal_helix.s, np.tan(THETA)
    u = np.arcsinh(k * s) / k
    np.testing.assert_allclose(normal_helix.phi, np.arctan(k * s), atol=1e-8)
    np.testing.assert_allclose(normal_helix.t, u, atol=1e-8)
    np.testing.assert_allclose(normal_helix.z, np.cosh(k * u) / k, atol=1e-8)


def test_generator_is_unit_speed(normal_helix):
    d = np.diff(normal_helix.position, axis=0)
    h = normal_helix.s[1] - normal_helix.s[0]
    assert np.max(np.abs(np.linalg.norm(d, axis=1) / h - 1)) < 1e-4  # chords shorten by O(h^2 kappa^2)


def test_predicted_curvatures_match_frenet(normal_helix, normal_frenet):
    assert np.max(np.abs(normal_frenet.kappa - normal_helix.kappa_pred)) < 1e-6
    assert np.max(np.abs(normal_frenet.tau - normal_helix.tau_pred)) < 1e-6


def test_closed_form_curvature():
    helix = circular_normal_helix(THETA)
    series = frenet_series(helix.curve, n=1024)
    s = series.s + helix.s_of_t(helix.curve.t_min)
    t = helix.t_of_s(s)
    np.testing.assert_allclose(series.kappa, helix.kappa_t(t), atol=1e-12)
    np.testing.assert_allclose(series.tau, helix.tau_t(t), atol=1e-12)
    np.testing.assert_allclose(helix.kappa_s(s), helix.kappa_t(t), atol=1e-12)


def test_angle_profile_constant(config, unit_cylinder, normal_frenet):
    profile = normal_angle_profile(normal_frenet, unit_cylinder, config)
    assert profile.constancy < 1e-6
    assert abs(profile.mean - THETA) < 1e-6


def test_ellipse_helix_predictions(config):
    ell = make_cylinder("ellipse", {"a": 1.5, "b": 1.0}, config=config)
    g = generate_normal_helix(ell, 0.2, 0.5, 0.0, 0.0, (-8, 8), config=config)
    series = g.frenet(config)
    assert np.max(np.abs(series.kappa - g.kappa_pred)) < 1e-4
    assert normal_angle_profile(series, ell, config).constancy < 1e-6


def test_geodesic_has_zero_angle(config, unit_cylinder):
    g = generate_normal_helix(unit_cylinder, 0.0, 0.0, 0.0, 0.5, (-5, 5), config=config)
    np.testing.assert_allclose(g.phi, 0.5, atol=1e-14)
    profile = normal_angle_profile(g.frenet(config), unit_cylinder, config)
    assert np.max(np.abs(profile.theta)) < 1e-6


def test_opposite_angle_mirrors_the_curve(config, unit_cylinder):
    a = generate_normal_helix(unit_cylinder, 0.3, s_range=(-3, 3), config=config)
    b = generate_normal_helix(unit_cylinder, -0.3, s_range=(-3, 3), config=config)
    np.testing.assert_allclose(a.kappa_pred, b.kappa_pred, atol=1e-12)
    np.testing.assert_allclose(a.tau_pred, -b.tau_pred, atol=1e-12)
    np.testing.assert_allclose(a.z, -b.z, atol=1e-12)


def test_slope_blowup(config, unit_cylinder):
    with pytest.raises(SlopeBlowup):
        generate_normal_helix(unit_cylinder, 1.4, s_range=(-400, 400), config=config)


def test_domain_checks(unit_cylinder):
    with pytest.raises(ValueError):
        generate_normal_helix(unit_cylinder, np.pi / 2)
    with pytest.raises(ValueError):
        generate_normal_helix(unit_cylinder, 0.1, phi0=2.0)


def test_general_helix_relation(config):
    g = generate_general_helix(1, 1, 1, lambda s: 0.6 - 0.1 * s, (-3, 3), theta_prime_fn=lambda s: -0.1, config=config)
    series = g.frenet(config)
    rel = slope_and_theta(series, g.axis, g.abc)
    assert np.max(np.abs(rel.relation)) < 1e-6
    assert np.max(np.abs(rel.theta - g.theta)) < 1e-6


def test_general_helix_errors(config):
    with pytest.raises(DegenerateBase):
        generate_general_helix(1, 1, 1, lambda s: 0.5 + 0 * s, (-1, 1), theta_prime_fn=lambda s: 0.0, config=config)
    with pytest.raises(ThetaZeroCrossing):
        generate_general_helix(1, 1, 1, lambda s: 0.1 * s, (-1, 1), theta_prime_fn=lambda s: 0.1, config=config)
    with pytest.raises(ValueError):
        generate_general_helix(-1, 1, 1, lambda s: 0.6 - 0.1 * s, (-1, 1), config=config)


def test_projection_and_off_surface(config, unit_cylinder):
    t, z, dist = unit_cylinder.project(unit_cylinder.X(np.array([0.3, 2.0]), np.array([1.0, -2.0])))
    np.testing.assert_allclose(t, [0.3, 2.0], atol=1e-12)
    np.testing.assert_allclose(z, [1.0, -2.0], atol=1e-12)
    assert np.max(dist) < 1e-12
    with pytest.raises(OffSurface):
        normal_angle_profile(frenet_series(twisted_cubic(), n=64), unit_cylinder, config)


def test_custom_base_must_be_planar(config):
    assert make_cylinder("custom", base=circle(2.0), config=config).length == pytest.approx(4 * np.pi)
    with pytest.raises(NonPlanarBase):
        make_cylinder("custom", base=twisted_cubic(), config=config)
