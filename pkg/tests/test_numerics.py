import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhelix._numerics import boundary_mask, fd_derivative, midpoint_values, rk4, rk4_from, rk4_sampled
from genhelix.config import DEFAULT, NumericConfig


@given(st.lists(st.floats(-3, 3), min_size=5, max_size=5))
def test_fd_derivative_is_exact_on_quartics(coeffs):
    x = np.linspace(-1.0, 1.0, 41)
    p = np.polynomial.Polynomial(coeffs)
    np.testing.assert_allclose(fd_derivative(p(x), x[1] - x[0]), p.deriv()(x), atol=1e-9)


def test_fd_derivative_is_fourth_order():
    errs = []
    for n in (101, 201):
        x = np.linspace(0, 2, n)
        errs.append(np.max(np.abs(fd_derivative(np.sin(3 * x), x[1] - x[0]) - 3 * np.cos(3 * x))))
    assert 12 < errs[0] / errs[1] < 20


def test_fd_derivative_needs_five_points():
    with pytest.raises(ValueError):
        fd_derivative(np.zeros(4), 0.1)


def test_boundary_mask_flags_two_nodes_per_end():
    assert boundary_mask(7).tolist() == [True, True, False, False, False, True, True]


def test_midpoint_values_exact_on_cubics():
    x = np.linspace(0, 1, 9)
    y = x**3 - 2 * x
    mid = 0.5 * (x[:-1] + x[1:])
    np.testing.assert_allclose(midpoint_values(y), mid**3 - 2 * mid, atol=1e-14)


def test_rk4_matches_exponential():
    s = np.linspace(0, 1, 101)
    y = rk4(lambda _s, y: -2 * y, 1.0, s)
    assert np.max(np.abs(y - np.exp(-2 * s))) < 1e-9


def test_rk4_sampled_uses_gridded_coefficient():
    s = np.linspace(0, 2, 201)
    y = rk4_sampled(lambda c, y: c * y, 1.0, s[1] - s[0], np.cos(s))
    assert np.max(np.abs(y - np.exp(np.sin(s)))) < 1e-8


@pytest.mark.parametrize("s_init", [-0.7, 0.33, 1.0, 2.5])
def test_rk4_from_starts_anywhere(s_init):
    s = np.linspace(-0.5, 1.5, 201)
    i0 = min(int(np.searchsorted(s, s_init)), len(s) - 1)
    y = rk4_from(lambda x, y: np.array([np.cos(x)]), [0.0], s, i0, s_init)
    assert np.max(np.abs(y[:, 0] - (np.sin(s) - np.sin(s_init)))) < 1e-9


def test_config_overrides_cast_and_reject_unknown():
    cfg = DEFAULT.with_overrides(n_grid="512", tol_law="1e-4")
    assert cfg.n_grid == 512 and cfg.tol_law == 1e-4
    assert cfg.generator_points == 1024
    with pytest.raises(KeyError):
        DEFAULT.with_overrides(bogus=1)
    assert NumericConfig().to_dict() == DEFAULT.to_dict()


@settings(max_examples=20)
@given(st.integers(8, 10_000))
def test_config_is_hashable_and_frozen(n):
    cfg = DEFAULT.with_overrides(n_grid=n)
    assert hash(cfg) == hash(DEFAULT.with_overrides(n_grid=n))
    with pytest.raises(Exception):
        cfg.n_grid = 3
