import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhelix.curvegeom import circular_helix, frenet_series, twisted_cubic
from genhelix.errors import GridTooCoarse
from genhelix.transport import frame_coefficients, relative_derivative, transport_field

vectors = st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3)


@pytest.fixture(scope="module")
def helix_frame():
    return frenet_series(circular_helix(3.0, 4.0, (0.0, 4 * np.pi)), n=2048).frame()


@settings(max_examples=10, deadline=None)
@given(vectors)
def test_transport_keeps_length_and_coefficients(helix_frame, w0):
    field = transport_field(helix_frame, w0)
    assert field.length_drift < 1e-9 * max(1.0, np.linalg.norm(w0))
    assert field.agreement < 1e-7 * max(1.0, np.linalg.norm(w0))
    assert frame_coefficients(field.W, helix_frame).score < 1e-7 * max(1.0, np.linalg.norm(w0))


def test_oracle_coefficients_are_initial_projections(helix_frame):
    field = transport_field(helix_frame, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(field.coefficients, helix_frame.frames[0] @ [1.0, 2.0, 3.0])
    assert set(field.columns()) == {"Wx", "Wy", "Wz"}


def test_relative_derivative_vanishes_only_for_frame_constant_fields(helix_frame):
    field = transport_field(helix_frame, [0.0, 1.0, 0.0])
    rel, mask = relative_derivative(field.W, helix_frame)
    assert np.max(np.abs(rel[~mask])) < 1e-8
    fixed = np.tile([1.0, 0.0, 0.0], (len(helix_frame.s), 1))
    rel_fixed, _ = relative_derivative(fixed, helix_frame)
    assert np.max(np.abs(rel_fixed)) > 0.05
    axis = np.tile([0.0, 0.0, 1.0], (len(helix_frame.s), 1))  # a helix axis is frame-constant
    assert np.max(np.abs(relative_derivative(axis, helix_frame)[0])) < 1e-12


def test_frame_constant_on_non_helix():
    frame = frenet_series(twisted_cubic(), n=2048).frame()
    field = transport_field(frame, [1.0, -1.0, 0.5])
    assert field.agreement < 1e-9


def test_coarse_grid_is_rejected():
    frame = frenet_series(circular_helix(1.0, 0.1, (0.0, 20 * np.pi)), n=40).frame()
    with pytest.raises(GridTooCoarse):
        transport_field(frame, [1.0, 0.0, 0.0])
    assert transport_field(frame, [1.0, 0.0, 0.0], strict=False).agreement > 1e-7


def test_bad_initial_vector():
    frame = frenet_series(circular_helix(), n=64).frame()
    with pytest.raises(ValueError):
        transport_field(frame, [1.0, np.nan, 0.0])
    with pytest.raises(ValueError):
        frame_coefficients(np.zeros((3, 3)), frame)
