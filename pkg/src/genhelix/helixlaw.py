"""Natural equations of generalized helices.

A curve is a helix for the unit triple ``(a, b, c)`` when the frame-constant
field ``W = aT + bN + cB`` stays orthogonal to a fixed axis ``V``. The
residual functions below vanish identically exactly on such curves; the
estimators invert them and :func:`classify` walks the classes from the
most to the least specific.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.optimize import minimize, minimize_scalar

from ._numerics import boundary_mask, fd_derivative, rk4, rk4_sampled
from .config import DEFAULT, NumericConfig
from .curvegeom import FrenetSeries, NaturalCurve, dot, norm
from .errors import BranchUnsupported, VanishingCurvature, VanishingDenominator, VanishingTorsion

_ZERO = 1e-12


@dataclass(frozen=True)
class HelixHypothesis:
    """Unit coefficients of ``W = aT + bN + cB``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if abs(np.sqrt(self.a**2 + self.b**2 + self.c**2) - 1.0) > 1e-12:
            raise ValueError("hypothesis coefficients must have unit norm")

    @classmethod
    def from_vector(cls, v):
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return cls(*map(float, v))

    @classmethod
    def normal(cls, theta):
        return cls(0.0, float(np.cos(theta)), float(np.sin(theta)))

    @classmethod
    def osculating(cls, theta):
        return cls(float(np.cos(theta)), float(np.sin(theta)), 0.0)

    @classmethod
    def rectifying(cls, theta):
        return cls(float(np.sin(theta)), 0.0, float(np.cos(theta)))

    @property
    def abc(self):
        return (self.a, self.b, self.c)

    @property
    def kind(self) -> str:
        za, zb, zc = (abs(x) <= _ZERO for x in self.abc)
        if zb and zc:
            return "tangent"
        if za and zc:
            return "principal_normal"
        if za and zb:
            return "binormal"
        if za:
            return "normal"
        if zc:
            return "osculating"
        if zb:
            return "rectifying"
        return "general"

    @property
    def theta(self) -> Optional[float]:
        kind = self.kind
        if kind in ("normal", "principal_normal"):
            return float(np.arctan2(self.c, self.b))
        if kind == "osculating":
            return float(np.arctan2(self.b, self.a))
        if kind == "rectifying":
            return float(np.arctan2(self.a, self.c))
        return None

    def canonical(self) -> "HelixHypothesis":
        """Representative of ``{W, -W}`` with ``b >= 0``, then ``a >= 0``, then ``c >= 0``."""
        for x in (self.b, self.a, self.c):
            if abs(x) > _ZERO:
                return self if x > 0 else HelixHypothesis(-self.a, -self.b, -self.c)
        return self


# ---------------------------------------------------------------------------
# Lancret curvature and residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LancretSeries:
    s: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray
    rho: np.ndarray
    rho_prime: np.ndarray
    h: float
    boundary: np.ndarray = field(repr=False, default=None)


def lancret_series(samples: FrenetSeries, config: NumericConfig = DEFAULT) -> LancretSeries:
    """``rho = tau/kappa`` and its derivative by fourth-order differences."""
    if np.any(samples.kappa <= config.kappa_min):
        raise VanishingCurvature("Lancret curvature needs kappa > kappa_min")
    h = samples.spacing
    rho = samples.tau / samples.kappa
    return LancretSeries(
        samples.s, samples.kappa, samples.tau, rho, fd_derivative(rho, h), h, boundary_mask(len(rho))
    )


def normal_residual(series: LancretSeries, theta: float):
    k, t = series.kappa, series.tau
    c2 = np.cos(theta) ** 2
    return k / (c2 * k * k + t * t) * series.rho_prime + np.tan(theta)


def _require_torsion(series, config):
    if np.any(np.abs(series.tau) <= config.tau_min):
        raise VanishingTorsion("osculating law needs nonvanishing torsion")


def osculating_residual(series: LancretSeries, theta: float, config: NumericConfig = DEFAULT):
    """``tau/(kappa^2 + sin^2 theta tau^2) (kappa/tau)' - cot(theta)``."""
    _require_torsion(series, config)
    k, t = series.kappa, series.tau
    sigma_prime = fd_derivative(k / t, series.h)
    s2 = np.sin(theta) ** 2
    return t / (k * k + s2 * t * t) * sigma_prime - np.cos(theta) / np.sin(theta)


def osculating_residual_rho_form(series: LancretSeries, theta: float):
    """The equivalent form in ``rho``: ``kappa^2/(kappa^2 + sin^2 theta tau^2) rho' + cot(theta) tau``."""
    k, t = series.kappa, series.tau
    s2 = np.sin(theta) ** 2
    return k * k / (k * k + s2 * t * t) * series.rho_prime + np.cos(theta) / np.sin(theta) * t


def rectifying_residual(series: LancretSeries):
    return series.rho_prime


def general_features(series: LancretSeries):
    """Columns whose linear combination with :func:`general_weights` is the general residual."""
    k, t = series.kappa, series.tau
    return np.stack((k * k * series.rho_prime, k**3, k * t * t, t**3, k * k * t), axis=-1)


def general_weights(a, b, c):
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    return -np.stack((b, c * (1 - c * c), c * (1 - 3 * a * a), a * (1 - a * a), a * (1 - 3 * c * c)), axis=-1)


def general_residual(series: LancretSeries, hyp: HelixHypothesis):
    """LHS minus RHS of the general helix equation

    ``-b k^2 rho' = c k ((1-c^2) k^2 + (1-3a^2) t^2) + a t ((1-a^2) t^2 + (1-3c^2) k^2)``.
    """
    return general_features(series) @ general_weights(*hyp.abc)


def reduction_factor(series: LancretSeries, hyp: HelixHypothesis, config: NumericConfig = DEFAULT):
    """Factor ``f`` and specialized residual ``r`` with ``general_residual == f * r``.

    ========================  ==============================================
    kind                      specialized residual ``r``
    ========================  ==============================================
    tangent, binormal         ``rho`` (plane curves)
    principal_normal          ``rho'`` (cylindrical helices)
    normal                    :func:`normal_residual`
    osculating                :func:`osculating_residual_rho_form`
    rectifying                ``rho - tan(theta)``
    general                   the general residual itself
    ========================  ==============================================

    The osculating row uses the ``rho'`` form of the law, which makes the
    identity exact on the grid and stays defined where ``tau`` vanishes.
    """
    k, t, rho = series.kappa, series.tau, series.rho
    kind, th = hyp.kind, hyp.theta
    if kind == "tangent":
        return -np.sign(hyp.a) * k**3, rho
    if kind == "binormal":
        return -np.sign(hyp.c) * k**3 * rho, rho
    if kind == "principal_normal":
        return -np.sign(hyp.b) * k * k, series.rho_prime
    if kind == "normal":
        c = np.cos(th)
        return -c * k * (c * c * k * k + t * t), normal_residual(series, th)
    if kind == "osculating":
        s = np.sin(th)
        return -s * (k * k + s * s * t * t), osculating_residual_rho_form(series, th)
    if kind == "rectifying":
        c, s = np.cos(th), np.sin(th)
        dev = rho - np.tan(th)
        return -(k**3) * c * c * dev * (c + s * rho), dev
    return np.ones_like(k), general_residual(series, hyp)


def rms(x) -> float:
    return float(np.sqrt(np.mean(np.square(x))))


# ---------------------------------------------------------------------------
# Axis reconstruction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxisReconstruction:
    s: np.ndarray
    V: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    W: np.ndarray
    drift: float
    orthogonality: float
    branch: str

    @property
    def axis(self):
        return self.V[0] / norm(self.V[0])


def _branch(hyp: HelixHypothesis) -> str:
    kind = hyp.kind
    if kind in ("normal", "principal_normal"):
        return "normal"
    if kind == "osculating":
        return "osculating"
    if kind == "general":
        return "general"
    if kind == "rectifying":
        raise BranchUnsupported("b = 0: use the rectifying test (constant Lancret curvature)")
    raise BranchUnsupported(f"W along a single Frenet vector ({kind}) does not determine an axis")


def reconstruct_axis(samples: FrenetSeries, hyp: HelixHypothesis, config: NumericConfig = DEFAULT) -> AxisReconstruction:
    """Rebuild the candidate axis ``V(s)`` from the Frenet data and ``W``.

    On a true helix ``V`` is constant and orthogonal to ``W``; ``drift`` and
    ``orthogonality`` measure both. Scale is fixed by ``mu(s0) = 1`` at the
    left end, and ``V``, ``lam``, ``mu`` are then divided by ``|V(s0)|``.
    """
    branch = _branch(hyp)
    a, b, c = hyp.abc
    T, N, B = samples.T, samples.N, samples.B
    k, t = samples.kappa, samples.tau
    h = samples.spacing
    if branch == "normal":
        th = hyp.theta
        int_tau = cumulative_simpson(t, dx=h, initial=0.0)
        mu = np.exp(np.tan(th) * int_tau)
        lam = -mu * (t / k) / np.cos(th)
        V = lam[:, None] * T + mu[:, None] * (np.sin(th) * N - np.cos(th) * B)
    elif branch == "osculating":
        th = hyp.theta
        if np.any(np.abs(t) <= config.tau_min):
            raise VanishingTorsion("osculating axis needs nonvanishing torsion")
        int_k = cumulative_simpson(k, dx=h, initial=0.0)
        mu = np.exp(-np.cos(th) / np.sin(th) * int_k)
        lam = -mu * (k / t) / np.sin(th)
        V = mu[:, None] * (-np.sin(th) * T + np.cos(th) * N) + lam[:, None] * B
    else:
        den = c * k + a * t
        if np.any(np.abs(den) <= config.tol_denominator * np.maximum(k, 1.0)):
            raise VanishingDenominator("c*kappa + a*tau vanishes")
        g = (a * c * k - (b * b + c * c) * t) / (b * den)
        mu = rk4_sampled(lambda coef, m: coef * m, 1.0, h, (c * t - a * k) / b)
        lam = g * mu
        V = lam[:, None] * (-c * T + a * B) + mu[:, None] * (-c * N + b * B)
    scale = norm(V[0])
    V, lam, mu = V / scale, lam / scale, mu / scale
    W = a * T + b * N + c * B
    drift = float(np.max(norm(V - V[0])))
    orth = float(np.max(np.abs(dot(W, V)) / (norm(W) * norm(V))))
    return AxisReconstruction(samples.s, V, lam, mu, W, drift, orth, branch)


def branch_ode_residuals(rec: AxisReconstruction, samples: FrenetSeries, hyp: HelixHypothesis):
    """Max-abs residuals of the three component equations of ``V' = 0``."""
    h = samples.spacing
    lam, mu = rec.lam, rec.mu
    dl, dm = fd_derivative(lam, h), fd_derivative(mu, h)
    k, t = samples.kappa, samples.tau
    a, b, c = hyp.abc
    if rec.branch == "normal":
        th = hyp.theta
        s, co = np.sin(th), np.cos(th)
        eqs = (dl - mu * s * k, s * dm + lam * k + mu * co * t, -co * dm + mu * s * t)
    elif rec.branch == "osculating":
        th = hyp.theta
        s, co = np.sin(th), np.cos(th)
        eqs = (-s * dm - mu * co * k, co * dm - lam * t - mu * s * k, dl + mu * co * t)
    else:
        eqs = (dl - mu * k, c * dm + lam * (c * k + a * t) + b * mu * t, a * dl + b * dm - c * mu * t)
    return tuple(float(np.max(np.abs(e))) for e in eqs)


# ---------------------------------------------------------------------------
# Inverse problems
# ---------------------------------------------------------------------------


def _newton_roots(coeffs, x0, iters=50):
    """Vectorized Newton for cubics ``c3 x^3 + c2 x^2 + c1 x + c0`` started at ``x0``."""
    c3, c2, c1, c0 = coeffs
    x = np.array(x0, dtype=float)
    for _ in range(iters):
        f = ((c3 * x + c2) * x + c1) * x + c0
        fp = (3 * c3 * x + 2 * c2) * x + c1
        step = np.where(np.abs(fp) > 1e-300, f / np.where(fp == 0, 1.0, fp), 0.0)
        x = x - step
    return x


def estimate_normal_theta(series: LancretSeries) -> float:
    """Normal-law angle: pointwise solve for ``tan(theta)``, take the median, polish by least squares."""
    k, t, rp = series.kappa, series.tau, series.rho_prime
    x0 = -k * rp / (k * k + t * t)
    x = _newton_roots((t * t, k * rp, k * k + t * t, k * rp), x0)
    theta0 = float(np.arctan(np.median(x[np.isfinite(x)])))
    lo, hi = max(theta0 - 0.05, -np.pi / 2 + 1e-9), min(theta0 + 0.05, np.pi / 2 - 1e-9)
    res = minimize_scalar(lambda th: rms(normal_residual(series, th)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
    return float(res.x) if res.fun <= rms(normal_residual(series, theta0)) else theta0


def estimate_osculating_theta(series: LancretSeries, config: NumericConfig = DEFAULT) -> float:
    """Osculating-law angle in ``(-pi/2, pi/2]`` (the law is pi-periodic in theta)."""
    _require_torsion(series, config)
    k, t = series.kappa, series.tau
    tsp = t * fd_derivative(k / t, series.h)
    y0 = tsp / (k * k + t * t)
    y = _newton_roots((k * k, -tsp, k * k + t * t, -tsp), y0)
    ym = float(np.median(y[np.isfinite(y)]))
    theta0 = float(np.arctan2(1.0, ym))
    if theta0 > np.pi / 2:
        theta0 -= np.pi

    def score(th):
        if abs(np.sin(th)) < 1e-12:
            return np.inf
        return rms(osculating_residual(series, th, config))

    lo, hi = theta0 - 0.05, theta0 + 0.05
    if theta0 > 0:
        lo = max(lo, 1e-9)
    else:
        hi = min(hi, -1e-9)
    res = minimize_scalar(score, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
    best = float(res.x) if res.fun <= score(theta0) else theta0
    if best <= -np.pi / 2:
        best += np.pi
    return best


@dataclass(frozen=True)
class HypothesisEstimate:
    hypothesis: HelixHypothesis
    score: float
    ambiguous: bool = False
    no_fit: bool = False


def _omega3_rms(series: LancretSeries) -> float:
    return rms(np.hypot(series.kappa, series.tau) ** 3)


def _normalized_gram(series: LancretSeries):
    F = general_features(series) / _omega3_rms(series)
    return F.T @ F / F.shape[0]


def hypothesis_score(series: LancretSeries, hyp: HelixHypothesis) -> float:
    """RMS of the general residual over the RMS of ``(kappa^2 + tau^2)^(3/2)``.

    The ratio is invariant under rescaling the curve.
    """
    return rms(general_residual(series, hyp)) / _omega3_rms(series)


def estimate_hypothesis(samples, config: NumericConfig = DEFAULT) -> HypothesisEstimate:
    """Best-fitting ``(a, b, c)`` on the unit sphere for the general helix law.

    Coarse search on a ``sphere_polar x sphere_azimuth`` grid followed by
    local descent from the best grid points. When ``rho' = 0`` (cylindrical
    helix) every rectifying hypothesis fits; the one with
    ``tan(theta) = rho`` is returned flagged ``ambiguous``.
    """
    series = samples if isinstance(samples, LancretSeries) else lancret_series(samples, config)
    if len(series.s) < 32:
        raise ValueError("need at least 32 samples")
    if np.max(np.abs(series.rho_prime)) <= config.tol_law:
        th = float(np.arctan(np.mean(series.rho)))
        hyp = HelixHypothesis.rectifying(th).canonical()
        return HypothesisEstimate(hyp, hypothesis_score(series, hyp), ambiguous=True)
    G = _normalized_gram(series)
    P = (np.arange(config.sphere_polar) + 0.5) * np.pi / config.sphere_polar
    A = np.arange(config.sphere_azimuth) * 2 * np.pi / config.sphere_azimuth
    PP, AA = np.meshgrid(P, A, indexing="ij")
    a, b, c = np.sin(PP) * np.cos(AA), np.cos(PP), np.sin(PP) * np.sin(AA)
    Wt = general_weights(a.ravel(), b.ravel(), c.ravel())
    scores = np.einsum("mi,ij,mj->m", Wt, G, Wt)
    starts = np.argsort(scores)[:6]

    def objective(x):
        x = x / np.linalg.norm(x)
        w = general_weights(*x)
        return float(w @ G @ w)

    best_x, best_f = None, np.inf
    for i in starts:
        x0 = np.array([a.ravel()[i], b.ravel()[i], c.ravel()[i]])
        res = minimize(objective, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-30, "maxiter": 4000})
        if res.fun < best_f:
            best_x, best_f = res.x / np.linalg.norm(res.x), res.fun
    hyp = HelixHypothesis.from_vector(best_x).canonical()
    score = hypothesis_score(series, hyp)
    return HypothesisEstimate(hyp, score, no_fit=score > config.tol_fit)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass
class HelixClass:
    klass: str
    theta: Optional[float] = None
    abc: Optional[tuple] = None
    residual_rms: Optional[float] = None
    axis: Optional[np.ndarray] = None
    axis_drift: Optional[float] = None
    ambiguous: bool = False
    scores: dict = field(default_factory=dict)
    residuals: Optional[np.ndarray] = None
    s: Optional[np.ndarray] = None

    def report(self, residuals_csv: Optional[str] = None) -> dict:
        def f(x):
            return None if x is None else float(x)

        return {
            "class": self.klass,
            "theta": f(self.theta),
            "abc": None if self.abc is None else [float(x) for x in self.abc],
            "residual_rms": f(self.residual_rms),
            "axis": None if self.axis is None else [float(x) for x in self.axis],
            "axis_drift": f(self.axis_drift),
            "ambiguous": self.ambiguous,
            "scores": {k: f(v) for k, v in self.scores.items()},
            "per_sample_residuals_csv": residuals_csv,
        }


def _with_axis(out: HelixClass, samples, hyp, config):
    try:
        rec = reconstruct_axis(samples, hyp, config)
    except (BranchUnsupported, VanishingDenominator, VanishingTorsion):
        return out
    out.axis, out.axis_drift = rec.axis, rec.drift
    return out


def classify(samples: FrenetSeries, config: NumericConfig = DEFAULT) -> HelixClass:
    """Most specific helix class of a sampled curve.

    Tests in order: plane (``max|tau|``), cylindrical (``max|rho'|``),
    normal, osculating and finally the general law. The normal and
    osculating verdicts use the RMS of the residual at the estimated angle
    against ``tol_law``; the general verdict uses the normalized score of
    :func:`estimate_hypothesis` against ``tol_fit``.
    """
    scores = {"planar": float(np.max(np.abs(samples.tau)))}
    if scores["planar"] <= config.tol_planar:
        return HelixClass("plane", abc=(0.0, 0.0, 1.0), residual_rms=scores["planar"], scores=scores, residuals=samples.tau, s=samples.s)
    series = lancret_series(samples, config)
    scores["rectifying"] = float(np.max(np.abs(series.rho_prime)))
    if scores["rectifying"] <= config.tol_law:
        hyp = HelixHypothesis.normal(0.0)
        out = HelixClass(
            "cylindrical",
            theta=float(np.arctan(np.mean(series.rho))),
            abc=hyp.abc,
            residual_rms=rms(series.rho_prime),
            scores=scores,
            residuals=series.rho_prime,
            s=series.s,
        )
        return _with_axis(out, samples, hyp, config)
    th_n = estimate_normal_theta(series)
    r_n = normal_residual(series, th_n)
    scores["normal"] = rms(r_n)
    if scores["normal"] <= config.tol_law:
        hyp = HelixHypothesis.normal(th_n)
        out = HelixClass("normal", th_n, hyp.abc, scores["normal"], scores=scores, residuals=r_n, s=series.s)
        return _with_axis(out, samples, hyp, config)
    if np.all(np.abs(series.tau) > config.tau_min):
        th_o = estimate_osculating_theta(series, config)
        r_o = osculating_residual(series, th_o, config)
        scores["osculating"] = rms(r_o)
        if scores["osculating"] <= config.tol_law:
            hyp = HelixHypothesis.osculating(th_o)
            out = HelixClass("osculating", th_o, hyp.canonical().abc, scores["osculating"], scores=scores, residuals=r_o, s=series.s)
            return _with_axis(out, samples, hyp, config)
    est = estimate_hypothesis(series, config)
    scores["general"] = est.score
    resid = general_residual(series, est.hypothesis)
    if not est.no_fit:
        out = HelixClass("helix", None, est.hypothesis.abc, est.score, scores=scores, residuals=resid, s=series.s)
        return _with_axis(out, samples, est.hypothesis, config)
    return HelixClass("none", None, est.hypothesis.abc, est.score, scores=scores, residuals=resid, s=series.s)


# ---------------------------------------------------------------------------
# Forward generation from the osculating law
# ---------------------------------------------------------------------------


def integrate_osculating_law(kappa_fn, theta, rho0, s, p0=(0.0, 0.0, 0.0), frame0=np.eye(3)):
    """Curve whose Lancret curvature solves the osculating law for ``theta``.

    With curvature ``kappa_fn(s)`` prescribed, ``rho`` follows
    ``rho' = -sin(theta) cos(theta) kappa rho^3 - cot(theta) kappa rho`` and
    the torsion is ``kappa * rho``. Returns the curve together with its
    ``kappa`` and ``tau`` samples.
    """
    st, ct = np.sin(theta), np.cos(theta)
    cot = ct / st

    def rhs(si, y):
        k = kappa_fn(si)
        rho = y[0]
        t = k * rho
        T, N, B = y[4:7], y[7:10], y[10:13]
        return np.concatenate(([-st * ct * k * rho**3 - cot * k * rho], T, k * N, -k * T + t * B, -t * N))

    y0 = np.concatenate(([rho0], np.asarray(p0, float), np.asarray(frame0, float).ravel()))
    y = rk4(rhs, y0, s)
    s = np.asarray(s, float)
    kappa = np.array([kappa_fn(x) for x in s])
    curve = NaturalCurve(s, y[:, 1:4], y[:, 4:7], y[:, 7:10], y[:, 10:13])
    return curve, kappa, kappa * y[:, 0]
