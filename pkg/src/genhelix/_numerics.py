"""Grid stencils and fixed-step integrators shared across modules."""

import numpy as np

# 4th-order one-sided first-derivative stencils for the two outermost nodes.
_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def fd_derivative(y, h):
    """First derivative of uniformly sampled data along axis 0.

    Fourth-order central differences in the interior and fourth-order
    one-sided stencils on the two nodes at each end. Use
    :func:`boundary_mask` to find the one-sided nodes.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 5:
        raise ValueError("need at least 5 samples for a 5-point stencil")
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / 12.0
    d[0] = np.tensordot(_EDGE0, y[:5], axes=(0, 0))
    d[1] = np.tensordot(_EDGE1, y[:5], axes=(0, 0))
    d[-1] = -np.tensordot(_EDGE0, y[::-1][:5], axes=(0, 0))
    d[-2] = -np.tensordot(_EDGE1, y[::-1][:5], axes=(0, 0))
    return d / h


def boundary_mask(n, width=2):
    mask = np.zeros(n, dtype=bool)
    mask[:width] = True
    mask[-width:] = True
    return mask


def midpoint_values(y):
    """Cubic (4-point Lagrange) interpolation of ``y`` at the half-nodes.

    Returns an array with ``len(y) - 1`` rows; row ``i`` approximates the
    value halfway between nodes ``i`` and ``i + 1``.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0]
    if n < 4:
        return 0.5 * (y[:-1] + y[1:])
    mid = np.empty((n - 1,) + y.shape[1:])
    mid[1:-1] = (-y[:-3] + 9.0 * y[1:-2] + 9.0 * y[2:-1] - y[3:]) / 16.0
    w = np.array([5.0, 15.0, -5.0, 1.0]) / 16.0
    mid[0] = np.tensordot(w, y[:4], axes=(0, 0))
    mid[-1] = np.tensordot(w, y[::-1][:4], axes=(0, 0))
    return mid


def rk4_sampled(f, y0, h, coeff):
    """Classical RK4 for ``y' = f(c(s), y)`` with ``c`` known only on the grid.

    Stage coefficients at half steps come from :func:`midpoint_values`, which
    keeps the scheme fourth order for smooth coefficients.
    """
    coeff = np.asarray(coeff, dtype=float)
    mid = midpoint_values(coeff)
    y0 = np.asarray(y0, dtype=float)
    n = coeff.shape[0]
    y = np.empty((n,) + y0.shape)
    y[0] = y0
    for i in range(n - 1):
        yi = y[i]
        k1 = f(coeff[i], yi)
        k2 = f(mid[i], yi + 0.5 * h * k1)
        k3 = f(mid[i], yi + 0.5 * h * k2)
        k4 = f(coeff[i + 1], yi + h * k3)
        y[i + 1] = yi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def rk4(f, y0, s):
    """Classical RK4 for ``y' = f(s, y)`` on the (possibly decreasing) grid ``s``."""
    s = np.asarray(s, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    y = np.empty((s.shape[0],) + y0.shape)
    y[0] = y0
    for i in range(s.shape[0] - 1):
        h = s[i + 1] - s[i]
        si, yi = s[i], y[i]
        k1 = f(si, yi)
        k2 = f(si + 0.5 * h, yi + 0.5 * h * k1)
        k3 = f(si + 0.5 * h, yi + 0.5 * h * k2)
        k4 = f(si + h, yi + h * k3)
        y[i + 1] = yi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


def rk4_from(f, y0, s, i0, s_init):
    """Integrate forward and backward from ``s_init`` onto every node of ``s``.

    ``s`` is increasing and ``s[i0 - 1] < s_init <= s[i0]`` (or ``i0 == 0`` when
    ``s_init <= s[0]``). A partial first step lands on the grid in each
    direction, after which the grid steps are used unchanged. An ``s_init``
    outside ``[s[0], s[-1]]`` is first carried to the nearer end with steps
    no longer than the grid spacing.
    """
    s = np.asarray(s, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    if s_init < s[0] or s_init > s[-1]:
        end = s[0] if s_init < s[0] else s[-1]
        h = abs(s[1] - s[0]) if s.shape[0] > 1 else abs(end - s_init)
        m = max(int(np.ceil(abs(end - s_init) / h)), 1)
        y0 = rk4(f, y0, np.linspace(s_init, end, m + 1))[-1]
        s_init, i0 = end, (0 if end == s[0] else s.shape[0] - 1)
    out = np.empty((s.shape[0],) + y0.shape)
    fwd = rk4(f, y0, np.concatenate(([s_init], s[i0:])))
    out[i0:] = fwd[1:]
    if s_init == s[i0]:
        out[i0] = y0
    if i0 > 0:
        back = rk4(f, y0, np.concatenate(([s_init], s[:i0][::-1])))
        out[:i0] = back[1:][::-1]
    return out
