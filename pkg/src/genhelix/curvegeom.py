"""Space curves, arclength, Frenet apparatus and Darboux vectors.

Vectors are plain ``numpy`` arrays with a trailing axis of length 3; a
batch of ``n`` vectors has shape ``(n, 3)``. Curve callables are vectorized:
given ``t`` of shape ``(n,)`` they return ``(n, 3)``, given a scalar they
return ``(3,)``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator, make_interp_spline, make_lsq_spline

from ._numerics import boundary_mask, fd_derivative, rk4
from .config import DEFAULT, NumericConfig
from .errors import FrameDegeneracy, GeometryError, RegularityError, VanishingCurvature

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def dot(u, v):
    return np.einsum("...i,...i->...", u, v)


def norm(v):
    return np.sqrt(dot(v, v))


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / norm(v)[..., None]


cross = np.cross


# ---------------------------------------------------------------------------
# Curve models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveModel:
    """A parametric space curve with derivatives up to order three.

    ``position``, ``d1``, ``d2`` and ``d3`` are vectorized callables of the
    parameter ``t`` on ``[t_min, t_max]``.
    """

    t_min: float
    t_max: float
    position: Callable
    d1: Callable
    d2: Callable
    d3: Callable
    derivative_source: str = "analytic"
    name: str = "curve"

    def eval(self, t):
        return self.position(np.asarray(t, dtype=float))

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        return self.position(t), self.d1(t), self.d2(t), self.d3(t)

    @property
    def domain(self):
        return (self.t_min, self.t_max)

    def reparametrized(self, scale: float) -> "CurveModel":
        """Same geometric curve under ``u = scale * t``."""
        k = float(scale)
        f, g1, g2, g3 = self.position, self.d1, self.d2, self.d3
        lo, hi = sorted((self.t_min * k, self.t_max * k))
        return CurveModel(
            lo,
            hi,
            lambda u: f(np.asarray(u) / k),
            lambda u: g1(np.asarray(u) / k) / k,
            lambda u: g2(np.asarray(u) / k) / k**2,
            lambda u: g3(np.asarray(u) / k) / k**3,
            self.derivative_source,
            f"{self.name}*{k:g}",
        )

    @classmethod
    def from_samples(cls, t, points, config: NumericConfig = DEFAULT, name="samples"):
        """Fit a smoothing B-spline through sampled positions.

        A least-squares spline of degree ``config.spline_degree`` is used when
        there are enough samples, with an interior knot every
        ``config.spline_knot_stride`` samples. A stride of 0 picks the
        coarsest knot vector that still reproduces the samples at the
        round-off level (see :func:`_lsq_spline`). Short inputs fall back to
        an interpolating quintic (or lower) spline.
        """
        t = np.asarray(t, dtype=float)
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 3 or points.shape[0] != t.shape[0]:
            raise ValueError("samples must be (n, 3) with one parameter value per row")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample parameters must be strictly increasing")
        offset = points.mean(axis=0)
        centered = points - offset
        k = config.spline_degree
        n = t.shape[0]
        if n >= max(8 * _MIN_STRIDE, 2 * (k + 1)):
            spline = _lsq_spline(t, centered, k, config.spline_knot_stride)
        else:
            kk = min(5, n - 1)
            kk -= 1 - kk % 2
            spline = make_interp_spline(t, centered, k=kk)
        s1, s2, s3 = spline.derivative(1), spline.derivative(2), spline.derivative(3)
        return cls(
            float(t[0]),
            float(t[-1]),
            lambda u: spline(u) + offset,
            s1,
            s2,
            s3,
            "spline",
            name,
        )

    @classmethod
    def finite_difference(cls, position, domain, h=None, name="fd"):
        """Wrap a position-only callable, estimating derivatives by stencils."""
        lo, hi = map(float, domain)
        h = h if h is not None else 1e-3 * (hi - lo)

        def _d1(t):
            return (-position(t + 2 * h) + 8 * position(t + h) - 8 * position(t - h) + position(t - 2 * h)) / (12 * h)

        def _d2(t):
            return (
                -position(t + 2 * h) + 16 * position(t + h) - 30 * position(t) + 16 * position(t - h) - position(t - 2 * h)
            ) / (12 * h * h)

        def _d3(t):
            return (position(t + 2 * h) - 2 * position(t + h) + 2 * position(t - h) - position(t - 2 * h)) / (2 * h**3)

        return cls(lo, hi, position, _d1, _d2, _d3, "finite_difference", name)


_MIN_STRIDE = 8
_STRIDES = (8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256)


def _lsq_fit(t, y, k, stride):
    m = (t.shape[0] - 1) // stride
    knots = np.concatenate((np.full(k + 1, t[0]), t[stride * np.arange(1, m)], np.full(k + 1, t[-1])))
    return make_lsq_spline(t, y, knots, k=k)


def _lsq_spline(t, y, k, stride=0, slack=3.0):
    """Least-squares spline; ``stride == 0`` selects the knot spacing.

    Third derivatives of a spline amplify the sample round-off roughly as
    ``1/spacing^3`` while the fit error shrinks like ``spacing^(k+1)``. The
    automatic choice takes the widest spacing whose worst fit error stays
    within ``slack`` times that of the densest candidate.
    """
    if stride > 0:
        return _lsq_fit(t, y, k, stride)
    n = t.shape[0]
    candidates = [st for st in _STRIDES if (n - 1) // st >= 4]
    best = _lsq_fit(t, y, k, candidates[0])
    floor = np.max(np.abs(best(t) - y))
    for st in candidates[1:]:
        trial = _lsq_fit(t, y, k, st)
        if np.max(np.abs(trial(t) - y)) > slack * floor:
            break
        best = trial
    return best


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def circle(R=1.0, t_range=(0.0, 2 * np.pi)) -> CurveModel:
    """Circle of radius ``R`` in the xy-plane, ``(R cos t, R sin t, 0)``."""
    R = float(R)
    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
    return CurveModel(
        *map(float, t_range),
        lambda t: _stack(R * np.cos(t), R * np.sin(t), zero(t)),
        lambda t: _stack(-R * np.sin(t), R * np.cos(t), zero(t)),
        lambda t: _stack(-R * np.cos(t), -R * np.sin(t), zero(t)),
        lambda t: _stack(R * np.sin(t), -R * np.cos(t), zero(t)),
        name=f"circle(R={R:g})",
    )


def circular_helix(r=3.0, h=4.0, t_range=(0.0, 2 * np.pi)) -> CurveModel:
    """``(r cos t, r sin t, h t)``; curvature ``r/(r^2+h^2)``, torsion ``h/(r^2+h^2)``."""
    r, h = float(r), float(h)
    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
    return CurveModel(
        *map(float, t_range),
        lambda t: _stack(r * np.cos(t), r * np.sin(t), h * np.asarray(t, dtype=float)),
        lambda t: _stack(-r * np.sin(t), r * np.cos(t), h + zero(t)),
        lambda t: _stack(-r * np.cos(t), -r * np.sin(t), zero(t)),
        lambda t: _stack(r * np.sin(t), -r * np.cos(t), zero(t)),
        name=f"circular_helix(r={r:g},h={h:g})",
    )


def line(p, v, t_range=(0.0, 1.0)) -> CurveModel:
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    zero = lambda t: np.zeros(np.shape(t) + (3,))  # noqa: E731
    return CurveModel(
        *map(float, t_range),
        lambda t: p + np.asarray(t, dtype=float)[..., None] * v,
        lambda t: zero(t) + v,
        zero,
        zero,
        name="line",
    )


def twisted_cubic(t_range=(0.2, 1.2)) -> CurveModel:
    """``(t, t^2, t^3)``: a standard non-helical test curve."""
    one = lambda t: np.ones_like(np.asarray(t, dtype=float))  # noqa: E731
    return CurveModel(
        *map(float, t_range),
        lambda t: _stack(t, np.asarray(t) ** 2, np.asarray(t) ** 3),
        lambda t: _stack(one(t), 2 * np.asarray(t), 3 * np.asarray(t) ** 2),
        lambda t: _stack(0 * one(t), 2 * one(t), 6 * np.asarray(t)),
        lambda t: _stack(0 * one(t), 0 * one(t), 6 * one(t)),
        name="twisted_cubic",
    )


# ---------------------------------------------------------------------------
# Arclength
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArclengthMap:
    """Monotone ``(t, s)`` table with exact evaluation and inversion.

    ``s_of_t`` integrates the speed with Gauss-Legendre quadrature from the
    nearest table node; ``t_of_s`` starts from a monotone cubic interpolant
    of the table and polishes with Newton steps.
    """

    curve: CurveModel
    t_nodes: np.ndarray
    s_nodes: np.ndarray
    quad_order: int = 8
    newton_steps: int = 4
    _inverse: Optional[PchipInterpolator] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if np.any(np.diff(self.s_nodes) <= 0):
            raise RegularityError("arclength is not strictly increasing")
        object.__setattr__(self, "_inverse", PchipInterpolator(self.s_nodes, self.t_nodes))

    @property
    def total_length(self) -> float:
        return float(self.s_nodes[-1])

    def speed(self, t):
        return norm(self.curve.d1(t))

    def s_of_t(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t)
        i = np.clip(np.searchsorted(self.t_nodes, flat, side="right") - 1, 0, len(self.t_nodes) - 2)
        x, w = np.polynomial.legendre.leggauss(self.quad_order)
        a = self.t_nodes[i]
        half = 0.5 * (flat - a)
        pts = a[:, None] + half[:, None] * (x[None, :] + 1.0)
        speed = self.speed(pts.ravel()).reshape(pts.shape)
        s = self.s_nodes[i] + half * (speed @ w)
        return s.reshape(t.shape)

    def t_of_s(self, s):
        s = np.asarray(s, dtype=float)
        L = self.total_length
        if np.any(s < -1e-9 * L) or np.any(s > L * (1 + 1e-9)):
            raise ValueError("arclength outside [0, total_length]")
        s = np.clip(s, 0.0, L)
        t = np.asarray(self._inverse(s), dtype=float)
        for _ in range(self.newton_steps):
            t = np.clip(t - (self.s_of_t(t) - s) / self.speed(t), self.t_nodes[0], self.t_nodes[-1])
        return t


def build_arclength_map(curve: CurveModel, n_nodes: Optional[int] = None, config: NumericConfig = DEFAULT) -> ArclengthMap:
    """Cumulative arclength table of ``curve`` on ``n_nodes`` uniform parameter nodes."""
    n_nodes = config.n_grid if n_nodes is None else int(n_nodes)
    if n_nodes < 2:
        raise ValueError("n_nodes must be at least 2")
    t_nodes = np.linspace(curve.t_min, curve.t_max, n_nodes)
    x, w = np.polynomial.legendre.leggauss(config.quad_order)
    half = 0.5 * np.diff(t_nodes)
    pts = t_nodes[:-1, None] + half[:, None] * (x[None, :] + 1.0)
    speed = norm(curve.d1(pts.ravel())).reshape(pts.shape)
    if np.any(speed <= config.eps_reg) or np.any(norm(curve.d1(t_nodes)) <= config.eps_reg):
        raise RegularityError(f"curve {curve.name!r} has vanishing speed")
    s_nodes = np.concatenate(([0.0], np.cumsum(half * (speed @ w))))
    return ArclengthMap(curve, t_nodes, s_nodes, config.quad_order, config.newton_steps)


# ---------------------------------------------------------------------------
# Frenet apparatus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrenetSample:
    s: float
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    darboux: np.ndarray


@dataclass(frozen=True)
class FrenetSeries:
    """Frenet apparatus on an arclength grid (arrays indexed by sample)."""

    s: np.ndarray
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    darboux: np.ndarray

    def __len__(self):
        return self.s.shape[0]

    def __getitem__(self, i) -> FrenetSample:
        return FrenetSample(
            float(self.s[i]),
            self.position[i],
            self.T[i],
            self.N[i],
            self.B[i],
            float(self.kappa[i]),
            float(self.tau[i]),
            self.darboux[i],
        )

    @property
    def spacing(self) -> float:
        ds = np.diff(self.s)
        h = float(ds.mean())
        if np.max(np.abs(ds - h)) > 1e-9 * max(abs(h), 1.0):
            raise ValueError("arclength grid is not uniform")
        return h

    def frame(self) -> "FrameField":
        return FrameField(self.s, np.stack((self.T, self.N, self.B), axis=1), self.darboux)

    def slice(self, mask) -> "FrenetSeries":
        return FrenetSeries(*(getattr(self, f)[mask] for f in self.__dataclass_fields__))

    def columns(self) -> dict:
        """Flat column mapping in the curve CSV schema order."""
        cols = {"s": self.s}
        for key, arr in (("", self.position), ("T", self.T), ("N", self.N), ("B", self.B)):
            for j, ax in enumerate("xyz"):
                cols[f"{key}{ax}"] = arr[:, j]
        cols["kappa"] = self.kappa
        cols["tau"] = self.tau
        for j, ax in enumerate("xyz"):
            cols[f"D{ax}"] = self.darboux[:, j]
        return cols


def frenet_from_derivatives(p, d1, d2, d3, s, config: NumericConfig = DEFAULT) -> FrenetSeries:
    """Frenet apparatus from parametric derivatives (any regular parameter)."""
    d1, d2, d3 = (np.atleast_2d(v) for v in (d1, d2, d3))
    c = cross(d1, d2)
    cn = norm(c)
    speed = norm(d1)
    if np.any(speed <= config.eps_reg):
        raise RegularityError("vanishing speed")
    kappa = cn / speed**3
    if np.any(kappa <= config.kappa_min):
        bad = np.flatnonzero(kappa <= config.kappa_min)
        raise VanishingCurvature(f"curvature <= {config.kappa_min:g} at {bad.size} sample(s)")
    tau = dot(c, d3) / cn**2
    T = d1 / speed[:, None]
    B = c / cn[:, None]
    N = cross(B, T)
    D = tau[:, None] * T + kappa[:, None] * B
    return FrenetSeries(np.atleast_1d(np.asarray(s, dtype=float)), np.atleast_2d(p), T, N, B, kappa, tau, D)


def frenet_apparatus(curve: CurveModel, amap: ArclengthMap, s: float, config: NumericConfig = DEFAULT) -> FrenetSample:
    """Frenet apparatus at arclength ``s`` measured from the start of ``curve``."""
    t = amap.t_of_s(np.atleast_1d(float(s)))
    return frenet_from_derivatives(*curve.derivatives(t), [s], config)[0]


def frenet_series(
    curve: CurveModel,
    amap: Optional[ArclengthMap] = None,
    n: Optional[int] = None,
    s=None,
    origin: float = 0.0,
    config: NumericConfig = DEFAULT,
) -> FrenetSeries:
    """Frenet apparatus on an arclength grid.

    By default the grid has ``config.n_grid`` uniform nodes over the whole
    curve. ``s`` (arclength from the start) overrides the grid; ``origin`` is
    added to the reported arclength so sampled curves can keep their own
    arclength coordinate.
    """
    amap = build_arclength_map(curve, config=config) if amap is None else amap
    if s is None:
        s = np.linspace(0.0, amap.total_length, config.n_grid if n is None else int(n))
    s = np.asarray(s, dtype=float)
    t = amap.t_of_s(s)
    return frenet_from_derivatives(*curve.derivatives(t), s + origin, config)


def total_curvature(sample, tol: float = 1e-10):
    """``sqrt(kappa^2 + tau^2)``, checked against the Darboux vector length.

    Works for a single :class:`FrenetSample` or a whole :class:`FrenetSeries`.
    """
    omega = np.hypot(sample.kappa, sample.tau)
    dn = norm(sample.darboux)
    if np.any(np.abs(dn - omega) > tol * np.maximum(1.0, omega)):
        raise GeometryError("Darboux vector length differs from total curvature")
    return omega if np.ndim(omega) else float(omega)


# ---------------------------------------------------------------------------
# Moving frames and Darboux vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameField:
    """Orthonormal frames ``frames[i] = (F1, F2, F3)`` (rows) on a uniform grid.

    ``darboux`` holds the angular velocity when it is known in closed form
    (e.g. ``tau T + kappa B`` for a Frenet frame); otherwise it is ``None``
    and :func:`darboux_of_frame` estimates it.
    """

    s: np.ndarray
    frames: np.ndarray
    darboux: Optional[np.ndarray] = None

    @property
    def F1(self):
        return self.frames[:, 0]

    @property
    def F2(self):
        return self.frames[:, 1]

    @property
    def F3(self):
        return self.frames[:, 2]

    @property
    def spacing(self) -> float:
        return float(np.mean(np.diff(self.s)))

    def orthonormality_error(self):
        gram = np.einsum("nij,nkj->nik", self.frames, self.frames)
        return np.max(np.abs(gram - np.eye(3)), axis=(1, 2))

    @classmethod
    def constant(cls, s, frame=np.eye(3)):
        s = np.asarray(s, dtype=float)
        return cls(s, np.broadcast_to(np.asarray(frame, float), (s.size, 3, 3)).copy(), np.zeros((s.size, 3)))

    @classmethod
    def rotating(cls, s, rate=1.0):
        """Frame spinning about ``e3`` at constant ``rate``."""
        s = np.asarray(s, dtype=float)
        c, w = np.cos(rate * s), np.sin(rate * s)
        z = np.zeros_like(s)
        frames = np.stack(
            (np.stack((c, w, z), -1), np.stack((-w, c, z), -1), np.stack((z, z, z + 1), -1)),
            axis=1,
        )
        return cls(s, frames, np.tile(rate * E3, (s.size, 1)))


@dataclass(frozen=True)
class DarbouxEstimate:
    s: np.ndarray
    D: np.ndarray
    residual: np.ndarray
    boundary: np.ndarray

    def at(self, s):
        return np.stack([np.interp(s, self.s, self.D[:, j]) for j in range(3)], axis=-1)


def frame_derivatives(frame: FrameField):
    return fd_derivative(frame.frames, frame.spacing)


def darboux_residuals(frame: FrameField, D, dframes=None):
    """Per-sample ``max_i |Fi' - D x Fi|`` with ``Fi'`` by finite differences."""
    dframes = frame_derivatives(frame) if dframes is None else dframes
    rot = cross(np.asarray(D)[:, None, :], frame.frames)
    return np.max(norm(dframes - rot), axis=1)


def darboux_of_frame(frame: FrameField, config: NumericConfig = DEFAULT) -> DarbouxEstimate:
    """Angular velocity of a sampled frame.

    ``D = <F2',F3> F1 + <F3',F1> F2 + <F1',F2> F3`` with derivatives from
    fourth-order differences; the two nodes at each end use one-sided
    stencils and are flagged in ``boundary``.
    """
    drift = frame.orthonormality_error()
    if np.any(drift > config.tol_frame):
        raise FrameDegeneracy(f"frame orthonormality drift {drift.max():.3e} exceeds {config.tol_frame:g}")
    dF = frame_derivatives(frame)
    F1, F2, F3 = frame.F1, frame.F2, frame.F3
    D = (
        dot(dF[:, 1], F3)[:, None] * F1
        + dot(dF[:, 2], F1)[:, None] * F2
        + dot(dF[:, 0], F2)[:, None] * F3
    )
    return DarbouxEstimate(frame.s, D, darboux_residuals(frame, D, dF), boundary_mask(len(frame.s)))


def frenet_serret_residuals(series: FrenetSeries):
    """``|T' - kN|, |N' + kT - tB|, |B' + tN|`` per sample (finite differences)."""
    h = series.spacing
    k, t = series.kappa[:, None], series.tau[:, None]
    dT, dN, dB = (fd_derivative(v, h) for v in (series.T, series.N, series.B))
    return (
        norm(dT - k * series.N),
        norm(dN + k * series.T - t * series.B),
        norm(dB + t * series.N),
    )


# ---------------------------------------------------------------------------
# Curves from natural equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaturalCurve:
    s: np.ndarray
    position: np.ndarray
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray


def curve_from_natural_equations(kappa_fn, tau_fn, s, p0=(0.0, 0.0, 0.0), frame0=np.eye(3)) -> NaturalCurve:
    """Integrate the Frenet-Serret system for prescribed curvature and torsion.

    ``kappa_fn`` and ``tau_fn`` are callables of arclength. Classical RK4 on
    the grid ``s``; the initial frame rows are ``(T, N, B)``.
    """

    def rhs(si, y):
        k, t = kappa_fn(si), tau_fn(si)
        T, N, B = y[3:6], y[6:9], y[9:12]
        return np.concatenate((T, k * N, -k * T + t * B, -t * N))

    y0 = np.concatenate((np.asarray(p0, float), np.asarray(frame0, float).ravel()))
    y = rk4(rhs, y0, s)
    return NaturalCurve(np.asarray(s, float), y[:, :3], y[:, 3:6], y[:, 6:9], y[:, 9:12])


# ---------------------------------------------------------------------------
# JSON curve specifications
# ---------------------------------------------------------------------------


def curve_from_spec(spec: dict, config: NumericConfig = DEFAULT) -> CurveModel:
    """Build a curve from ``{"kind": ..., "name": ..., "params": {...}}``."""
    kind = spec.get("kind", "analytic")
    name = spec.get("name")
    params = dict(spec.get("params", {}))
    if kind == "samples" or name == "custom_samples":
        rows = np.asarray(params.get("samples", spec.get("samples")), dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 4:
            raise ValueError("custom_samples needs rows of [t, x, y, z]")
        return CurveModel.from_samples(rows[:, 0], rows[:, 1:], config, name="custom_samples")
    if kind != "analytic":
        raise ValueError(f"unknown curve kind {kind!r}")
    t_range = tuple(params.pop("t_range", ())) or None
    if name == "circular_helix":
        return circular_helix(params.get("r", 3.0), params.get("h", 4.0), t_range or (0.0, 2 * np.pi))
    if name == "circle":
        return circle(params.get("R", 1.0), t_range or (0.0, 2 * np.pi))
    if name == "twisted_cubic":
        return twisted_cubic(t_range or (0.2, 1.2))
    if name == "paper_normal_helix":
        from .cylinderlab import circular_normal_helix

        return circular_normal_helix(
            params["theta"], params.get("t0", 0.0), params.get("z0", 0.0), t_range or (-5.0, 5.0)
        ).curve
    raise ValueError(f"unknown analytic curve {name!r}")
