import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhelix.config import DEFAULT
from genhelix.curvegeom import (
    CurveModel,
    build_arclength_map,
    circle,
    circular_helix,
    curve_from_natural_equations,
    curve_from_spec,
    darboux_of_frame,
    darboux_residuals,
    frenet_series,
    frenet_serret_residuals,
    line,
    total_curvature,
    twisted_cubic,
)
from genhelix.errors import VanishingCurvature


def _orthonormality(series):
    F = np.stack((series.T, series.N, series.B), axis=1)
    return np.max(np.abs(F @ np.swapaxes(F, 1, 2) - np.eye(3)))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(-5.0, 5.0).filter(lambda h: abs(h) > 0.05))
def test_circular_helix_constants(r, h):
    series = frenet_series(circular_helix(r, h), n=256)
    d = r * r + h * h
    np.testing.assert_allclose(series.kappa, r / d, rtol=1e-10)
    np.testing.assert_allclose(series.tau, h / d, rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(series.darboux, axis=1), 1 / np.sqrt(d), rtol=1e-10)
    assert _orthonormality(series) < 1e-12


def test_circular_helix_arclength():
    amap = build_arclength_map(circular_helix(3.0, 4.0, (0.0, 4 * np.pi)))
    assert abs(amap.total_length - 20 * np.pi) < 1e-10
    s = np.linspace(0, amap.total_length, 17)
    np.testing.assert_allclose(amap.t_of_s(s), s / 5.0, atol=1e-12)


def test_twisted_cubic_against_closed_form():
    curve = twisted_cubic()
    amap = build_arclength_map(curve)
    series = frenet_series(curve, amap, n=512)
    t = amap.t_of_s(series.s)
    q = 9 * t**4 + 9 * t**2 + 1
    kappa = 2 * np.sqrt(q) / (1 + 4 * t**2 + 9 * t**4) ** 1.5
    np.testing.assert_allclose(series.kappa, kappa, rtol=1e-10)
    np.testing.assert_allclose(series.tau, 3 / q, rtol=1e-10)


def test_planar_circle_has_zero_torsion():
    series = frenet_series(circle(2.0), n=256)
    np.testing.assert_allclose(series.kappa, 0.5, rtol=1e-12)
    assert np.max(np.abs(series.tau)) < 1e-12


def test_line_has_no_frenet_frame():
    with pytest.raises(VanishingCurvature):
        frenet_series(line((0, 0, 0), (1, 2, 3)), n=64)


def test_total_curvature_on_helix():
    series = frenet_series(circular_helix(), n=64)
    assert np.isclose(total_curvature(series[3]), np.hypot(0.12, 0.16))


def test_frenet_serret_and_darboux_residuals_small():
    series = frenet_series(circular_helix(), n=2048)
    assert max(np.max(r) for r in frenet_serret_residuals(series)) < 1e-9
    assert np.max(darboux_residuals(series.frame(), series.darboux)) < 1e-9
    est = darboux_of_frame(series.frame())
    assert np.max(np.abs(est.D - series.darboux)[~est.boundary]) < 1e-9


def test_reparametrization_leaves_geometry_unchanged():
    curve = twisted_cubic()
    a = frenet_series(curve, n=128)
    b = frenet_series(curve.reparametrized(3.0), n=128)
    np.testing.assert_allclose(a.kappa, b.kappa, rtol=1e-9)
    np.testing.assert_allclose(a.tau, b.tau, rtol=1e-9)


def test_natural_equations_round_trip():
    s = np.linspace(0.0, 6.0, 3001)
    nat = curve_from_natural_equations(lambda x: 1 + 0.3 * np.sin(x), lambda x: 0.5 + 0.1 * x, s)
    fit = CurveModel.from_samples(s, nat.position, DEFAULT)
    series = frenet_series(fit, s=s[200:-200] - s[0])
    np.testing.assert_allclose(series.kappa, 1 + 0.3 * np.sin(series.s), atol=1e-6)
    np.testing.assert_allclose(series.tau, 0.5 + 0.1 * series.s, atol=1e-5)


def test_spline_fit_reproduces_helix():
    t = np.linspace(0, 4 * np.pi, 2000)
    pts = np.column_stack((3 * np.cos(t), 3 * np.sin(t), 4 * t))
    series = frenet_series(CurveModel.from_samples(t, pts), n=1024)
    assert np.max(np.abs(series.kappa - 0.12)) < 1e-6
    assert np.max(np.abs(series.tau - 0.16)) < 1e-5


def test_from_samples_validates_input():
    with pytest.raises(ValueError):
        CurveModel.from_samples([0, 1, 1, 2], np.zeros((4, 3)))
    with pytest.raises(ValueError):
        CurveModel.from_samples([0, 1, 2], np.zeros((3, 2)))


def test_curve_spec_kinds():
    helix = curve_from_spec({"kind": "analytic", "name": "circular_helix", "params": {"r": 3, "h": 4}})
    assert np.allclose(frenet_series(helix, n=32).kappa, 0.12)
    rows = [[t, np.cos(t), np.sin(t), 0.2 * t] for t in np.linspace(0, 3, 200)]
    sampled = curve_from_spec({"kind": "samples", "name": "custom_samples", "params": {"samples": rows}})
    assert sampled.derivative_source != "analytic"
    with pytest.raises(ValueError):
        curve_from_spec({"kind": "analytic", "name": "nope"})
