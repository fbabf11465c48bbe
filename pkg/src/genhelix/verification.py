"""Reproduction checks with explicit tolerances.

Each check builds its own test curves from the numeric configuration,
measures a handful of quantities and compares each with a tolerance. The
suite never aborts: a check that raises is recorded as failed with the
error message. Grid sizes follow ``config.n_grid``, so forcing a coarse
grid makes the finite-difference checks fail visibly.
"""

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .config import DEFAULT, NumericConfig
from .curvegeom import (
    build_arclength_map,
    circle,
    circular_helix,
    darboux_of_frame,
    darboux_residuals,
    frenet_series,
    norm,
    twisted_cubic,
    unit,
)
from .cylinderlab import (
    circular_normal_helix,
    generate_general_helix,
    generate_normal_helix,
    make_cylinder,
    normal_angle_profile,
)
from .duality import binormal_dual
from .errors import GeometryError
from .helixlaw import (
    HelixHypothesis,
    classify,
    estimate_hypothesis,
    general_residual,
    hypothesis_score,
    lancret_series,
    normal_residual,
    osculating_residual,
    reconstruct_axis,
    reduction_factor,
    rms,
)
from .io import dumps, format_csv
from .transport import frame_coefficients, transport_field

THETA = np.pi / 36


@dataclass(frozen=True)
class Measurement:
    name: str
    value: float
    tol: float
    relation: str = "<="

    @property
    def passed(self) -> bool:
        v = self.value
        if not np.isfinite(v):
            return False
        if self.relation == "<=":
            return v <= self.tol
        if self.relation == ">=":
            return v >= self.tol
        return v == self.tol

    def as_dict(self) -> dict:
        return {"name": self.name, "value": float(self.value), "tol": float(self.tol), "relation": self.relation, "passed": self.passed}


@dataclass
class CheckResult:
    check_id: str
    title: str
    measurements: list = field(default_factory=list)
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(m.passed for m in self.measurements)

    def as_dict(self) -> dict:
        return {
            "id": self.check_id,
            "title": self.title,
            "passed": self.passed,
            "error": self.error,
            "measurements": [m.as_dict() for m in self.measurements],
        }


# ---------------------------------------------------------------------------
# Shared test curves
# ---------------------------------------------------------------------------


def _reference_helix_uncached(config, s_range=(-10.0, 10.0), theta=THETA):
    # z0 = cot(theta) aligns the generator with the closed form at s = 0
    return generate_normal_helix(make_cylinder(config=config), theta, 0.0, 1.0 / np.tan(theta), 0.0, s_range, config=config)


@lru_cache(maxsize=8)
def _reference_helix(config, s_range=(-10.0, 10.0)):
    return _reference_helix_uncached(config, s_range)


@lru_cache(maxsize=8)
def _reference_frenet(config, s_range=(-10.0, 10.0)):
    return _reference_helix(config, s_range).frenet(config)


@lru_cache(maxsize=4)
def _circular_series(config, turns=2.0, n=None):
    curve = circular_helix(3.0, 4.0, (0.0, 2 * np.pi * turns))
    return frenet_series(curve, n=n or config.n_grid, config=config)


def _normal_helix_set(config):
    circ = make_cylinder(config=config)
    ell = make_cylinder("ellipse", {"a": 1.5, "b": 1.0}, config=config)
    return [
        ("circle theta=pi/36", circ, THETA, _reference_helix(config)),
        ("circle theta=-0.25", circ, -0.25, generate_normal_helix(circ, -0.25, 0.3, 0.0, 0.2, (-6, 6), config=config)),
        ("ellipse theta=0.2", ell, 0.2, generate_normal_helix(ell, 0.2, 0.5, 0.0, 0.0, (-8, 8), config=config)),
    ]


def _general_inputs():
    return [
        ((1.0, 1.0, 1.0), lambda s: 0.6 - 0.1 * s, lambda s: -0.1),
        ((2.0, 1.0, 2.0), lambda s: 0.5 - 0.08 * s, lambda s: -0.08),
    ]


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_closed_form_curvature(config):
    cf = circular_normal_helix(THETA, 0.0, 0.0, (-5.0, 5.0))
    amap = build_arclength_map(cf.curve, config=config)
    t = np.linspace(-5.0, 5.0, config.n_grid)
    series = frenet_series(cf.curve, amap, s=amap.s_of_t(t), config=config)
    k = np.tan(THETA) * t
    kappa = 1.0 / (np.cos(THETA) * np.cosh(k) ** 2)
    tau = -np.sinh(k) / np.cosh(k) ** 2
    return [
        Measurement("max |kappa - sec(theta)/cosh^2|", np.max(np.abs(series.kappa - kappa)), 1e-6),
        Measurement("max |tau + sinh/cosh^2|", np.max(np.abs(series.tau - tau)), 1e-6),
    ]


def check_generator_closed_form(config):
    g = _reference_helix(config)
    k = np.tan(THETA)
    s = g.s
    return [
        Measurement("max |phi - arctan(tan(theta) s)|", np.max(np.abs(g.phi - np.arctan(k * s))), 1e-8),
        Measurement("max |t - asinh(tan(theta) s)/tan(theta)|", np.max(np.abs(g.t - np.arcsinh(k * s) / k)), 1e-8),
        Measurement("max |z - cot(theta) sqrt(1 + (tan(theta) s)^2)|", np.max(np.abs(g.z - np.hypot(1.0, k * s) / k)), 1e-8),
    ]


def check_normal_law(config):
    series = lancret_series(_reference_frenet(config), config)
    return [
        Measurement("rms normal residual, matching theta", rms(normal_residual(series, THETA)), 1e-5),
        Measurement("rms normal residual, theta + 0.1", rms(normal_residual(series, THETA + 0.1)), 0.05, ">="),
    ]


def check_axis_reconstruction(config):
    out = []
    for label, cyl, theta, g in _normal_helix_set(config):
        rec = reconstruct_axis(g.frenet(config), HelixHypothesis.normal(theta), config)
        ax = rec.axis
        angle = np.arctan2(np.linalg.norm(np.cross(ax, cyl.axis)), abs(ax @ cyl.axis))
        out += [
            Measurement(f"{label}: axis drift", rec.drift, 1e-6),
            Measurement(f"{label}: max |<W,V>|/(|W||V|)", rec.orthogonality, 1e-8),
            Measurement(f"{label}: angle to cylinder axis [rad]", angle, 1e-5),
        ]
    return out


def check_transport(config):
    turns = 10
    series = _circular_series(config, turns, 4 * config.n_grid)
    frame = series.frame()
    W0 = unit(np.array([1.0, 2.0, 2.0]))
    field_ = transport_field(frame, W0, config, strict=False)
    return [
        Measurement("10 turns: max ||W| - |W0||", field_.length_drift, 1e-9),
        Measurement("10 turns: frame-coefficient drift", frame_coefficients(field_.W, frame).score, 1e-7),
        Measurement("10 turns: RK4 vs frame-coefficient oracle", field_.agreement, 1e-7),
    ]


def check_darboux(config):
    out = []
    for label, series in (("circular helix", _circular_series(config)), ("normal helix", _reference_frenet(config))):
        frame = series.frame()
        out.append(Measurement(f"{label}: max |Fi' - D x Fi|", np.max(darboux_residuals(frame, series.darboux)), 1e-5))
        est = darboux_of_frame(frame, config)
        out.append(Measurement(f"{label}: max |D_est - (tau T + kappa B)|", np.max(norm(est.D - series.darboux)), 1e-5))
        omega = np.hypot(series.kappa, series.tau)
        out.append(Measurement(f"{label}: max ||D| - sqrt(kappa^2 + tau^2)|", np.max(np.abs(norm(series.darboux) - omega)), 1e-10))
    return out


def check_duality(config):
    circ = _circular_series(config)
    d = binormal_dual(circ, config)
    dd = binormal_dual(d.samples, config)
    normal = _reference_frenet(config, (-10.0, -0.5))
    dp = binormal_dual(normal, config)
    dual_law = lancret_series(dp.samples, config)
    return [
        Measurement("circular: max |kappa_dual - 4/25|", np.max(np.abs(d.samples.kappa - 4 / 25)), 1e-5),
        Measurement("circular: max |tau_dual - 3/25|", np.max(np.abs(d.samples.tau - 3 / 25)), 1e-5),
        Measurement("circular: frame relations", max(d.frame_relation_residuals), 1e-5),
        Measurement("normal helix (tau > 0): curvature swap", max(dp.curvature_swap_residuals), 1e-5),
        Measurement("normal helix (tau > 0): frame relations", max(dp.frame_relation_residuals), 1e-5),
        Measurement("dual: rms osculating residual at theta + pi/2", rms(osculating_residual(dual_law, THETA + np.pi / 2, config)), 1e-4),
        Measurement("double dual: max |kappa - 3/25|", np.max(np.abs(dd.samples.kappa - 3 / 25)), 2e-5),
        Measurement("double dual: max |tau - 4/25|", np.max(np.abs(dd.samples.tau - 4 / 25)), 2e-5),
    ]


def check_rectifying(config):
    circ = _circular_series(config)
    normal = _reference_frenet(config)
    lc, lp = lancret_series(circ, config), lancret_series(normal, config)
    return [
        Measurement("circular: max |rho'|", np.max(np.abs(lc.rho_prime)), config.tol_law),
        Measurement("circular: classified cylindrical", float(classify(circ, config).klass == "cylindrical"), 1.0, "=="),
        Measurement("normal helix: max |rho'|", np.max(np.abs(lp.rho_prime)), config.tol_law, ">="),
        Measurement("normal helix: classified cylindrical", float(classify(normal, config).klass == "cylindrical"), 0.0, "=="),
        Measurement("normal helix: max |rho' + sin(theta)|", np.max(np.abs(lp.rho_prime + np.sin(THETA))), 1e-6),
    ]


def _reduction_curves(config):
    normal = _reference_frenet(config, (-10.0, -0.5))
    a, fn, dfn = _general_inputs()[0]
    general = generate_general_helix(*a, fn, (-3, 3), theta_prime_fn=dfn, config=config).frenet(config)
    return [
        ("circular helix", _circular_series(config), float(np.arctan(4 / 3))),
        ("normal helix", normal, THETA),
        ("dual of normal helix", binormal_dual(normal, config).samples, THETA + np.pi / 2),
        ("general helix", general, 0.6),
        ("twisted cubic", frenet_series(twisted_cubic(), config=config), 0.3),
        ("plane circle", frenet_series(circle(2.0), config=config), 0.4),
    ]


def reduction_table(config: NumericConfig = DEFAULT):
    """Rows ``(curve, pattern, general vanishes, specialized vanishes, factor error)``."""
    rows = []
    for label, series, theta in _reduction_curves(config):
        law = lancret_series(series, config)
        omega3 = rms(np.hypot(law.kappa, law.tau) ** 3)
        c, s = np.cos(theta), np.sin(theta)
        patterns = {
            "normal": HelixHypothesis(0.0, c, s),
            "osculating": HelixHypothesis(c, s, 0.0),
            "rectifying": HelixHypothesis(s, 0.0, c),
            "tangent": HelixHypothesis(1.0, 0.0, 0.0),
            "principal_normal": HelixHypothesis(0.0, 1.0, 0.0),
            "binormal": HelixHypothesis(0.0, 0.0, 1.0),
        }
        for name, hyp in patterns.items():
            factor, special = reduction_factor(law, hyp, config)
            general = general_residual(law, hyp)
            rows.append(
                (
                    label,
                    name,
                    hypothesis_score(law, hyp) <= config.tol_fit,
                    rms(special) <= config.tol_law,
                    float(np.max(np.abs(general - factor * special)) / omega3),
                )
            )
    return rows


def check_reduction_table(config):
    rows = reduction_table(config)
    mismatched = sum(g != sp for _, _, g, sp, _ in rows)
    return [
        Measurement(f"vanish/non-vanish verdict mismatches ({len(rows)} cases)", float(mismatched), 0.0, "=="),
        Measurement("max |general - factor * specialized| / rms(omega^3)", max(e for *_, e in rows), config.tol_law),
        Measurement("cases where the general law vanishes", float(sum(g for _, _, g, _, _ in rows)), 1.0, ">="),
    ]


def check_inverse_problem(config):
    out = []
    for abc, fn, dfn in _general_inputs():
        g = generate_general_helix(*abc, fn, (-3, 3), theta_prime_fn=dfn, config=config)
        est = estimate_hypothesis(g.frenet(config), config)
        truth = HelixHypothesis.from_vector(abc).canonical()
        err = np.max(np.abs(np.array(est.hypothesis.abc) - np.array(truth.abc)))
        label = "(" + ",".join(f"{x:g}" for x in abc) + ")"
        out.append(Measurement(f"general helix {label}: max component error", err, 1e-3))
    res = classify(_reference_frenet(config), config)
    out.append(Measurement("normal helix: classified normal", float(res.klass == "normal"), 1.0, "=="))
    theta_err = abs(res.theta - THETA) if res.theta is not None else np.inf
    out.append(Measurement("normal helix: |theta - pi/36|", theta_err, 1e-4))
    return out


def check_angle_constancy(config):
    out = []
    for label, cyl, theta, g in _normal_helix_set(config):
        prof = normal_angle_profile(g.frenet(config), cyl, config)
        out.append(Measurement(f"{label}: angle constancy", prof.constancy, 1e-6))
        out.append(Measurement(f"{label}: |mean angle - theta|", abs(prof.mean - theta), 1e-6))
    for label, cyl in (("circle", make_cylinder(config=config)), ("ellipse", make_cylinder("ellipse", {"a": 1.5, "b": 1.0}, config=config))):
        g = generate_normal_helix(cyl, 0.0, 0.5, 0.0, 0.3, (-6, 6), config=config)
        prof = normal_angle_profile(g.frenet(config), cyl, config)
        out.append(Measurement(f"geodesic on {label}: max |angle|", np.max(np.abs(prof.theta)), 1e-6))
    return out


def _pipeline_digest(config):
    g = _reference_helix_uncached(config)
    series = g.frenet(config)
    text = format_csv({**series.columns(), **g.columns()}) + dumps(classify(series, config).report())
    return hashlib.sha256(text.encode()).hexdigest()


def check_determinism(config):
    same = _pipeline_digest(config) == _pipeline_digest(config)
    return [Measurement("generate + classify twice: identical bytes", float(same), 1.0, "==")]


CHECKS: dict = {
    "closed-form-curvature": ("Closed-form curvature and torsion of the circular-cylinder normal helix", check_closed_form_curvature),
    "generator-closed-form": ("Generator matches the closed-form slope and coordinates", check_generator_closed_form),
    "normal-law": ("Normal-helix natural equation and its discrimination margin", check_normal_law),
    "axis-reconstruction": ("Axis reconstruction on generated normal helices", check_axis_reconstruction),
    "transport": ("Frame-constant transport over ten helix turns", check_transport),
    "darboux": ("Darboux vector identities", check_darboux),
    "duality": ("Binormal duality swaps curvature and torsion", check_duality),
    "rectifying": ("Rectifying helices are exactly the cylindrical helices", check_rectifying),
    "reduction-table": ("General helix law reduces to the special laws", check_reduction_table),
    "inverse-problem": ("Recovering (a, b, c) and theta from samples", check_inverse_problem),
    "angle-constancy": ("Constant angle between principal and cylinder normals", check_angle_constancy),
    "determinism": ("Byte-identical outputs across runs", check_determinism),
}


def run_check(check_id: str, config: NumericConfig = DEFAULT) -> CheckResult:
    title, fn = CHECKS[check_id]
    try:
        return CheckResult(check_id, title, fn(config))
    except (GeometryError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return CheckResult(check_id, title, error=f"{type(exc).__name__}: {exc}")


def run_checks(config: NumericConfig = DEFAULT, only=None) -> list:
    ids = list(CHECKS) if not only else list(only)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return [run_check(i, config) for i in ids]


def report(results, config: NumericConfig = DEFAULT) -> dict:
    return {
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
        "numeric_config": config.to_dict(),
    }


def format_table(results) -> str:
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.check_id}: {r.title}")
        if r.error:
            lines.append(f"    error: {r.error}")
        for m in r.measurements:
            mark = "ok " if m.passed else "BAD"
            lines.append(f"    {mark} {m.name}: {m.value:.3e} (need {m.relation} {m.tol:.1e})")
    return "\n".join(lines) + "\n"
