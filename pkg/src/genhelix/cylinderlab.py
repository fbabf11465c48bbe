"""Helices realized as curves on generalized cylinders.

A cylinder is ``X(t, z) = beta(t) + z V`` over a unit-speed planar base
curve ``beta`` lying in the plane orthogonal to the unit axis ``V``. The
cylinder normal is fixed as ``N = T_beta x V`` and the base curvature
``kappa_beta`` is signed with respect to that normal (``T_beta' = kappa_beta N``).
Built-in bases are oriented so that ``N`` points inward and
``kappa_beta > 0``; flipping ``V`` mirrors every construction and negates
the normal angle.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from ._numerics import rk4_from
from .config import DEFAULT, NumericConfig
from .curvegeom import (
    E1,
    E2,
    E3,
    CurveModel,
    FrenetSeries,
    build_arclength_map,
    cross,
    dot,
    frenet_series,
    norm,
    unit,
)
from .errors import (
    DegenerateBase,
    DegenerateSpeed,
    NonPlanarBase,
    OffSurface,
    SlopeBlowup,
    ThetaZero,
    ThetaZeroCrossing,
    UndefinedTheta,
)


def _plane_basis(axis):
    V = np.asarray(axis, dtype=float)
    if abs(norm(V) - 1.0) > 1e-9:
        raise ValueError("cylinder axis must be a unit vector")
    V = V / norm(V)
    ref = E1 if norm(cross(E1, V)) > 0.5 else E2
    u = unit(ref - dot(ref, V) * V)
    w = cross(u, V)
    return V, u, w


@dataclass(frozen=True)
class CylinderSpec:
    """Generalized cylinder over a unit-speed planar base.

    ``base_uv(t)`` and ``tangent_uv(t)`` return in-plane coordinates with
    respect to the orthonormal basis ``(u, w)``; ``w = u x V`` so that a
    counter-clockwise turn in ``(u, w)`` has ``T x V`` pointing inward.
    """

    kind: str
    params: dict
    axis: np.ndarray
    u: np.ndarray
    w: np.ndarray
    origin: np.ndarray
    base_uv: Callable
    tangent_uv: Callable
    kappa: Callable
    length: float
    period: Optional[float] = None
    _lookup: Optional[tuple] = field(default=None, repr=False, compare=False)

    def _embed(self, uv):
        uv = np.asarray(uv)
        return uv[..., :1] * self.u + uv[..., 1:2] * self.w

    def base_point(self, t):
        return self.origin + self._embed(self.base_uv(t))

    def base_tangent(self, t):
        return self._embed(self.tangent_uv(t))

    def normal(self, t):
        return cross(self.base_tangent(t), self.axis)

    def X(self, t, z):
        return self.base_point(t) + np.asarray(z, dtype=float)[..., None] * self.axis

    def project(self, points):
        """Surface coordinates ``(t, z)`` of the nearest base point and the distance to the surface."""
        p = np.atleast_2d(np.asarray(points, dtype=float)) - self.origin
        z = p @ self.axis
        q = np.stack((p @ self.u, p @ self.w), axis=-1)
        grid_t, grid_uv = self._lookup
        d2 = ((q[:, None, :] - grid_uv[None, :, :]) ** 2).sum(-1) if len(q) * len(grid_t) < 4e7 else None
        if d2 is None:
            idx = np.array([np.argmin(((grid_uv - qi) ** 2).sum(-1)) for qi in q])
        else:
            idx = np.argmin(d2, axis=1)
        t = grid_t[idx]
        for _ in range(8):
            r = self.base_uv(t) - q
            tan = self.tangent_uv(t)
            nrm = np.stack((-tan[..., 1], tan[..., 0]), axis=-1)
            f = (r * tan).sum(-1)
            fp = 1.0 + self.kappa(t) * (r * nrm).sum(-1)
            t = t - f / fp
            if self.period is None:
                t = np.clip(t, 0.0, self.length)
        dist = np.sqrt(((self.base_uv(t) - q) ** 2).sum(-1))
        return t, z, dist


def _circle_base(R):
    R = float(R)

    def uv(t):
        a = np.asarray(t, dtype=float) / R
        return np.stack((R * np.cos(a), R * np.sin(a)), axis=-1)

    def tan(t):
        a = np.asarray(t, dtype=float) / R
        return np.stack((-np.sin(a), np.cos(a)), axis=-1)

    def kappa(t):
        return np.full(np.shape(t), 1.0 / R)

    return uv, tan, kappa, 2 * np.pi * R, 2 * np.pi * R


def _ellipse_base(a, b, config):
    a, b = float(a), float(b)
    zero = lambda s: np.zeros_like(np.asarray(s, dtype=float))  # noqa: E731
    param = CurveModel(
        0.0,
        2 * np.pi,
        lambda s: np.stack(np.broadcast_arrays(a * np.cos(s), b * np.sin(s), zero(s)), -1),
        lambda s: np.stack(np.broadcast_arrays(-a * np.sin(s), b * np.cos(s), zero(s)), -1),
        lambda s: np.stack(np.broadcast_arrays(-a * np.cos(s), -b * np.sin(s), zero(s)), -1),
        lambda s: np.stack(np.broadcast_arrays(a * np.sin(s), -b * np.cos(s), zero(s)), -1),
        name="ellipse",
    )
    amap = build_arclength_map(param, n_nodes=max(config.n_grid, 512), config=config)
    L = amap.total_length

    def sigma(t):
        return amap.t_of_s(np.mod(np.asarray(t, dtype=float), L))

    def uv(t):
        s = sigma(t)
        return np.stack((a * np.cos(s), b * np.sin(s)), axis=-1)

    def tan(t):
        s = sigma(t)
        v = np.stack((-a * np.sin(s), b * np.cos(s)), axis=-1)
        return v / np.linalg.norm(v, axis=-1, keepdims=True)

    nodes = np.linspace(0.0, L, 4097)
    sn = sigma(nodes)
    k_nodes = a * b / (a**2 * np.sin(sn) ** 2 + b**2 * np.cos(sn) ** 2) ** 1.5
    k_nodes[-1] = k_nodes[0]
    k_spline = CubicSpline(nodes, k_nodes, bc_type="periodic")

    def kappa(t):
        return k_spline(np.mod(np.asarray(t, dtype=float), L))

    return uv, tan, kappa, L, L


def _custom_base(curve: CurveModel, V, u, w, origin, config):
    amap = build_arclength_map(curve, config=config)
    L = amap.total_length
    probe = curve.eval(np.linspace(curve.t_min, curve.t_max, 257)) - origin
    height = probe @ V
    if np.max(np.abs(height - height[0])) > config.tol_surface * (1 + np.max(np.abs(probe))):
        raise NonPlanarBase("base curve leaves the plane orthogonal to the axis")

    def uv(t):
        p = curve.eval(amap.t_of_s(np.clip(t, 0.0, L))) - origin
        return np.stack((p @ u, p @ w), axis=-1)

    def tan(t):
        d = curve.d1(amap.t_of_s(np.clip(t, 0.0, L)))
        d = d / norm(d)[..., None]
        return np.stack((d @ u, d @ w), axis=-1)

    nodes = np.linspace(0.0, L, max(config.n_grid, 513))
    tn = amap.t_of_s(nodes)
    d1, d2 = curve.d1(tn), curve.d2(tn)
    k_nodes = dot(d2, cross(d1, V)) / norm(d1) ** 3
    k_spline = CubicSpline(nodes, k_nodes)
    return uv, tan, lambda t: k_spline(np.clip(t, 0.0, L)), L, None


def make_cylinder(base_kind="circle", params=None, axis=E3, origin=(0.0, 0.0, 0.0), base=None, config: NumericConfig = DEFAULT) -> CylinderSpec:
    """Build a cylinder over a circle, an ellipse or a custom planar curve.

    ``params``: ``{"R": ...}`` for ``"circle"``, ``{"a": ..., "b": ...}`` for
    ``"ellipse"``. For ``"custom"`` pass the base as a :class:`CurveModel`
    through ``base``; it is reparametrized by arclength and must lie in a
    plane orthogonal to ``axis`` (else :class:`NonPlanarBase`).
    """
    params = dict(params or {})
    V, u, w = _plane_basis(axis)
    origin = np.asarray(origin, dtype=float)
    if base_kind == "circle":
        pieces = _circle_base(params.get("R", 1.0))
    elif base_kind == "ellipse":
        pieces = _ellipse_base(params.get("a", 1.5), params.get("b", 1.0), config)
    elif base_kind == "custom":
        if base is None:
            raise ValueError("custom cylinder needs a base curve")
        pieces = _custom_base(base, V, u, w, origin, config)
    else:
        raise ValueError(f"unknown base kind {base_kind!r}")
    uv, tan, kappa, length, period = pieces
    grid_t = np.linspace(0.0, length, 2048, endpoint=period is None)
    lookup = (grid_t, uv(grid_t))
    return CylinderSpec(base_kind, params, V, u, w, origin, uv, tan, kappa, float(length), period, lookup)


# ---------------------------------------------------------------------------
# Generated curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SampledCurve:
    """Arclength-parametrized samples with spline-based analysis helpers.

    Generators also keep ``pad`` extra nodes on each side of the requested
    range in ``fit_s`` and ``fit_position``. The spline is fitted on the
    padded data, so the ends of the requested range are interior points of
    the fit, where its derivatives are most accurate.
    """

    s: np.ndarray
    position: np.ndarray
    fit_s: Optional[np.ndarray] = field(default=None, repr=False, kw_only=True)
    fit_position: Optional[np.ndarray] = field(default=None, repr=False, kw_only=True)

    def curve(self, config: NumericConfig = DEFAULT) -> CurveModel:
        s, p = (self.s, self.position) if self.fit_s is None else (self.fit_s, self.fit_position)
        return CurveModel.from_samples(s, p, config, name=type(self).__name__)

    def frenet(self, config: NumericConfig = DEFAULT, n: Optional[int] = None) -> FrenetSeries:
        """Frenet data from a spline fit of the positions.

        Evaluated on the generator grid by default, or on ``n`` uniform
        arclength nodes spanning the requested range.
        """
        curve = self.curve(config)
        amap = build_arclength_map(curve, config=config)
        origin = self.s[0] if self.fit_s is None else self.fit_s[0]
        lo, hi = self.s[0] - origin, self.s[-1] - origin
        grid = self.s - origin if n is None else np.linspace(lo, hi, n)
        return frenet_series(curve, amap, s=np.clip(grid, 0.0, amap.total_length), origin=origin, config=config)


@dataclass(frozen=True)
class GeneratedHelix(SampledCurve):
    t: np.ndarray = None
    z: np.ndarray = None
    phi: np.ndarray = None
    theta: float = 0.0
    kappa_pred: np.ndarray = None
    tau_pred: np.ndarray = None
    cylinder: CylinderSpec = None

    def columns(self) -> dict:
        return {"t": self.t, "z_cyl": self.z, "phi": self.phi, "theta": np.full_like(self.s, self.theta)}


def _grid(s_range, n_points, s_init, inside=True):
    s0, s1 = map(float, s_range)
    if not s1 > s0:
        raise ValueError("s_range must be increasing")
    s = np.linspace(s0, s1, int(n_points))
    s_init = s0 if s_init is None else float(s_init)
    if inside and not s0 <= s_init <= s1:
        raise ValueError("s_init must lie inside s_range")
    return s, s_init


def _padded(s, pad):
    """``s`` extended by ``pad`` equally spaced nodes per side, and the slice of ``s`` in it."""
    h = s[1] - s[0]
    left = s[0] - h * np.arange(pad, 0, -1)
    right = s[-1] + h * np.arange(1, pad + 1)
    return np.concatenate((left, s, right)), slice(pad, pad + s.shape[0])


def _start(grid, s_init):
    return min(int(np.searchsorted(grid, s_init, side="left")), grid.shape[0] - 1)


def generate_normal_helix(
    cyl: CylinderSpec,
    theta: float,
    t0: float = 0.0,
    z0: float = 0.0,
    phi0: float = 0.0,
    s_range=(-10.0, 10.0),
    n_points: Optional[int] = None,
    s_init: Optional[float] = 0.0,
    config: NumericConfig = DEFAULT,
) -> GeneratedHelix:
    """Curve on ``cyl`` whose principal normal keeps angle ``theta`` with the cylinder normal.

    Integrates ``t' = cos(phi)``, ``z' = sin(phi)``,
    ``phi' = tan(theta) cos(phi)^2 kappa_beta(t)`` with RK4 from the state
    ``(t0, z0, phi0)`` at arclength ``s_init`` (forward and backward) onto
    ``n_points`` uniform nodes of ``s_range``. Also returns the predicted
    curvature ``cos(phi)^2 kappa_beta / cos(theta)`` and torsion
    ``-sin(phi) cos(phi) kappa_beta``.
    """
    theta = float(theta)
    if not -np.pi / 2 < theta < np.pi / 2:
        raise ValueError("theta must lie in (-pi/2, pi/2)")
    if not abs(phi0) < np.pi / 2:
        raise ValueError("phi0 must lie in (-pi/2, pi/2)")
    n_points = config.generator_points if n_points is None else n_points
    s, s_init = _grid(s_range, n_points, s_init, inside=False)
    grid, core = _padded(s, config.generator_pad)
    k = np.tan(theta)
    limit = np.pi / 2 - config.phi_guard

    def rhs(_s, y):
        c = np.cos(y[2])
        return np.array([c, np.sin(y[2]), k * c * c * cyl.kappa(y[0])])

    with np.errstate(all="ignore"):
        y = rk4_from(rhs, [t0, z0, phi0], grid, _start(grid, s_init), s_init)
    bad = ~np.isfinite(y).all(axis=1) | (np.abs(y[:, 2]) > limit)
    if bad[core].any():
        where = s[np.flatnonzero(bad[core])[0]]
        raise SlopeBlowup(f"slope angle reaches the ruling direction near s={where:.6g}")
    fit = {} if bad.any() else {"fit_s": grid, "fit_position": cyl.X(y[:, 0], y[:, 1])}
    t, z, phi = y[core].T
    kb = cyl.kappa(t)
    c, sn = np.cos(phi), np.sin(phi)
    return GeneratedHelix(
        s,
        cyl.X(t, z),
        t,
        z,
        phi,
        theta,
        c * c * kb / np.cos(theta),
        -sn * c * kb,
        cyl,
        **fit,
    )


@dataclass(frozen=True)
class ClosedFormNormalHelix:
    """Normal helices on the unit circular cylinder in closed form.

    In the curve parameter ``t`` the position is
    ``beta(t + t0) + (cot(theta) cosh(tan(theta) t) + z0) V`` and the
    arclength is ``s = sinh(tan(theta) t) / tan(theta)``.
    """

    theta: float
    t0: float
    z0: float
    cylinder: CylinderSpec
    curve: CurveModel

    @property
    def _k(self):
        return np.tan(self.theta)

    def kappa_t(self, t):
        return 1.0 / (np.cos(self.theta) * np.cosh(self._k * np.asarray(t)) ** 2)

    def tau_t(self, t):
        x = self._k * np.asarray(t)
        return -np.sinh(x) / np.cosh(x) ** 2

    def s_of_t(self, t):
        return np.sinh(self._k * np.asarray(t)) / self._k

    def t_of_s(self, s):
        return np.arcsinh(self._k * np.asarray(s)) / self._k

    def phi_s(self, s):
        return np.arctan(self._k * np.asarray(s))

    def t_s(self, s):
        """Cylinder coordinate ``t`` (base arclength) at curve arclength ``s``."""
        return self.t_of_s(s) + self.t0

    def z_s(self, s):
        return np.sqrt(1.0 + (self._k * np.asarray(s)) ** 2) / self._k + self.z0

    def kappa_s(self, s):
        c, sn = np.cos(self.theta), np.sin(self.theta)
        return c / (c * c + sn * sn * np.asarray(s) ** 2)

    def tau_s(self, s):
        c, sn = np.cos(self.theta), np.sin(self.theta)
        s = np.asarray(s)
        return -sn * c * s / (c * c + sn * sn * s**2)

    def position_s(self, s):
        return self.cylinder.X(self.t_s(s), self.z_s(s))


def circular_normal_helix(theta, t0=0.0, z0=0.0, t_range=(-5.0, 5.0), axis=E3) -> ClosedFormNormalHelix:
    """Closed-form normal helix with constant normal angle ``theta`` on the unit circular cylinder."""
    theta = float(theta)
    if theta == 0.0:
        raise ThetaZero("theta = 0 gives geodesics; use generate_normal_helix")
    if not -np.pi / 2 < theta < np.pi / 2:
        raise ValueError("theta must lie in (-pi/2, pi/2)")
    cyl = make_cylinder("circle", {"R": 1.0}, axis)
    k = np.tan(theta)
    V, u, w = cyl.axis, cyl.u, cyl.w
    t0, z0 = float(t0), float(z0)

    def ring(t, order):
        a = np.asarray(t, dtype=float) + t0
        c, s = np.cos(a), np.sin(a)
        cs = [(c, s), (-s, c), (-c, -s), (s, -c)][order]
        return cs[0][..., None] * u + cs[1][..., None] * w

    def height(t, order):
        x = k * np.asarray(t, dtype=float)
        return [np.cosh(x) / k + z0, np.sinh(x), k * np.cosh(x), k * k * np.sinh(x)][order]

    def part(order):
        return lambda t: ring(t, order) + height(t, order)[..., None] * V

    curve = CurveModel(
        float(t_range[0]),
        float(t_range[1]),
        part(0),
        part(1),
        part(2),
        part(3),
        name=f"circular_normal_helix(theta={theta:.17g})",
    )
    return ClosedFormNormalHelix(theta, t0, z0, cyl, curve)


# ---------------------------------------------------------------------------
# Angle diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AngleProfile:
    s: np.ndarray
    theta: np.ndarray
    constancy: float
    mean: float
    t: np.ndarray
    z: np.ndarray
    distance: np.ndarray


def normal_angle_profile(series: FrenetSeries, cyl: CylinderSpec, config: NumericConfig = DEFAULT) -> AngleProfile:
    """Signed angle between the principal normal and the cylinder normal.

    ``theta = atan2(<N_a, N x T_a>, <N_a, N>)``; on a normal helix this is
    the constant angle of the construction. ``constancy`` is
    ``max_s |theta(s) - theta(s0)|``.
    """
    t, z, dist = cyl.project(series.position)
    tol = config.tol_surface * (1.0 + np.abs(z))
    if np.any(dist > tol):
        i = int(np.argmax(dist - tol))
        raise OffSurface(f"sample {i} is {dist[i]:.3e} away from the cylinder")
    Nc = cyl.normal(t)
    theta = np.arctan2(dot(series.N, cross(Nc, series.T)), dot(series.N, Nc))
    return AngleProfile(
        series.s, theta, float(np.max(np.abs(theta - theta[0]))), float(np.mean(theta)), t, z, dist
    )


@dataclass(frozen=True)
class SlopeTheta:
    phi: np.ndarray
    theta: np.ndarray
    relation: Optional[np.ndarray] = None


def slope_and_theta(series: FrenetSeries, axis, abc=None) -> SlopeTheta:
    """Slope angle ``phi`` and normal angle ``theta`` relative to the axis ``V``.

    ``sin(phi) = <T, V>`` and ``theta`` solves
    ``sin(theta) <B, V> + cos(theta) <N, V> = 0`` on the branch with
    ``<N, V> = sin(theta) cos(phi)``, made continuous in ``s``. With
    ``abc`` the residual ``a tan(phi) + b sin(theta) - c cos(theta)`` is
    returned as ``relation``.
    """
    V = unit(np.asarray(axis, dtype=float))
    phi = np.arcsin(np.clip(dot(series.T, V), -1.0, 1.0))
    nv, bv = dot(series.N, V), dot(series.B, V)
    if np.any(np.hypot(nv, bv) <= 1e-12):
        raise UndefinedTheta("tangent parallel to the axis: theta undefined")
    theta = np.unwrap(np.arctan2(nv, -bv))
    relation = None
    if abc is not None:
        a, b, c = map(float, abc)
        relation = a * np.tan(phi) + b * np.sin(theta) - c * np.cos(theta)
    return SlopeTheta(phi, theta, relation)


@dataclass(frozen=True)
class GeneratedGeneralHelix(SampledCurve):
    t: np.ndarray = None
    z: np.ndarray = None
    phi: np.ndarray = None
    theta: np.ndarray = None
    kappa_beta: np.ndarray = None
    base: np.ndarray = None
    abc: tuple = None
    axis: np.ndarray = None

    def columns(self) -> dict:
        return {"t": self.t, "z_cyl": self.z, "phi": self.phi, "theta": self.theta}


def generate_general_helix(
    a,
    b,
    c,
    theta_fn,
    s_range=(-3.0, 3.0),
    n_points: Optional[int] = None,
    theta_prime_fn=None,
    axis=E3,
    s_init: Optional[float] = None,
    config: NumericConfig = DEFAULT,
) -> GeneratedGeneralHelix:
    """Helix for ``W = aT + bN + cB`` with a prescribed, non-constant normal angle ``theta(s)``.

    The surface coordinates follow ``t' = a/r``, ``z' = q/r`` with
    ``q = -b sin(theta) + c cos(theta)`` and ``r = sqrt(a^2 + q^2)``; the
    base curvature is ``-(b cos(theta) + c sin(theta)) theta' / (a tan(theta))``.
    The base itself is rebuilt by integrating the planar Frenet system
    (turning angle ``psi' = kappa_beta t'``) from the identity frame at
    ``s_init``, all with RK4.

    Requires ``a > 0`` (negate ``(a, b, c)`` otherwise) and a base curvature
    that stays positive, so that the principal normal of the result is the
    one used in the construction.
    """
    a, b, c = map(float, (a, b, c))
    nrm = np.sqrt(a * a + b * b + c * c)
    a, b, c = a / nrm, b / nrm, c / nrm
    if a <= 0.0:
        raise ValueError("a must be positive")
    if b == 0.0 and c == 0.0:
        raise ValueError("b and c cannot both vanish")
    if theta_prime_fn is None:
        eps = 1e-5

        def theta_prime_fn(s):
            return (theta_fn(s + eps) - theta_fn(s - eps)) / (2 * eps)

    n_points = config.generator_points if n_points is None else n_points
    s, s_init = _grid(s_range, n_points, s_init)
    grid, core = _padded(s, config.generator_pad)
    th = np.array([theta_fn(x) for x in grid], dtype=float)
    dth = np.array([theta_prime_fn(x) for x in grid], dtype=float)
    q = -b * np.sin(th) + c * np.cos(th)
    kb = -(b * np.cos(th) + c * np.sin(th)) * dth / (a * np.tan(th))
    ok = (np.abs(np.tan(th)) >= 1e-12) & (np.sign(th) == np.sign(th[core][0]))
    ok &= a * a + q * q > config.tol_denominator
    ok &= kb > config.kappa_min
    if np.any(np.abs(np.tan(th[core])) < 1e-12) or np.any(np.diff(np.sign(th[core])) != 0):
        raise ThetaZeroCrossing("theta(s) reaches zero on the range")
    if np.any(a * a + q[core] ** 2 <= config.tol_denominator):
        raise DegenerateSpeed("a^2 + (c cos(theta) - b sin(theta))^2 vanishes")
    if np.max(np.abs(kb[core])) <= config.kappa_min:
        raise DegenerateBase("constant theta: base curvature vanishes and the cylinder is a plane")
    if np.any(kb[core] <= config.kappa_min):
        raise DegenerateBase("base curvature must stay positive along the range")
    if not ok.all():
        grid, core = s, slice(None)

    def rhs(x, y):
        th_x = theta_fn(x)
        qx = -b * np.sin(th_x) + c * np.cos(th_x)
        r = np.sqrt(a * a + qx * qx)
        tp = a / r
        kbx = -(b * np.cos(th_x) + c * np.sin(th_x)) * theta_prime_fn(x) / (a * np.tan(th_x))
        return np.array([tp, qx / r, kbx * tp, tp * np.cos(y[2]), tp * np.sin(y[2])])

    y = rk4_from(rhs, np.zeros(5), grid, _start(grid, s_init), s_init)
    V, u, w = _plane_basis(axis)
    fitted = y[:, 3:4] * u + y[:, 4:5] * w + y[:, 1:2] * V
    fit = {"fit_s": grid, "fit_position": fitted} if grid is not s else {}
    y, th, q, kb = y[core], th[core], q[core], kb[core]
    base = y[:, 3:4] * u + y[:, 4:5] * w
    position = base + y[:, 1:2] * V
    r = np.sqrt(a * a + q * q)
    phi = np.arctan2(q / r, a / r)
    return GeneratedGeneralHelix(s, position, y[:, 0], y[:, 1], phi, th, kb, base, (a, b, c), V, **fit)
