"""Command-line entry point.

Subcommands::

    generate      sample a curve (normal/general helix on a cylinder, or a circular helix)
    analyze       Frenet apparatus of a curve, optionally with a transported field
    classify      most specific helix class of a curve
    dual          binormal dual of a curve
    verify-paper  run the reproduction checks and print a pass/fail table

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .config import DEFAULT, NumericConfig
from .curvegeom import build_arclength_map, circular_helix, darboux_residuals, frenet_series, frenet_serret_residuals
from .cylinderlab import generate_general_helix, generate_normal_helix, make_cylinder
from .duality import binormal_dual
from .errors import GeometryError
from .helixlaw import classify
from .io import load_curve, write_csv, write_json, write_manifest
from .transport import transport_field

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    """Invalid user configuration; the message names the offending field."""


@dataclass
class RunConfig:
    command: str
    numeric: NumericConfig
    out: Path
    input: Optional[Path] = None
    settings: dict = field(default_factory=dict)
    only: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def _parse_tol(items):
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--tol expects name=value, got {item!r}")
        out[name.strip()] = value.strip()
    return out


def build_run_config(args) -> RunConfig:
    settings = {}
    if args.config:
        try:
            settings = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from exc
        if not isinstance(settings, dict):
            raise ConfigError("config: top level must be a JSON object")
    overrides = dict(settings.get("numeric", {}))
    overrides.update(_parse_tol(args.tol))
    if args.grid is not None:
        overrides["n_grid"] = args.grid
    try:
        numeric = DEFAULT.with_overrides(**overrides)
    except KeyError as exc:
        raise ConfigError(f"numeric: {exc.args[0]}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"numeric: {exc}") from exc
    if numeric.n_grid < 8:
        raise ConfigError("n_grid: must be at least 8")
    inp = getattr(args, "input", None) or settings.get("input")
    only = []
    for item in getattr(args, "only", None) or ():
        only += [x for x in item.split(",") if x]
    return RunConfig(args.command, numeric, Path(args.out), Path(inp) if inp else None, settings, only)


def _number(settings, key, default=None, lo=None, hi=None, open_interval=False):
    value = settings.get(key, default)
    if value is None:
        raise ConfigError(f"{key}: required")
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from exc
    if not np.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    below = lo is not None and (value <= lo if open_interval else value < lo)
    above = hi is not None and (value >= hi if open_interval else value > hi)
    if below or above:
        brackets = "()" if open_interval else "[]"
        bounds = f"{brackets[0]}{'-inf' if lo is None else f'{lo:.17g}'}, {'inf' if hi is None else f'{hi:.17g}'}{brackets[1]}"
        raise ConfigError(f"{key}: {value!r} outside {bounds}")
    return value


def _s_grid(settings, numeric, default=(-10.0, 10.0)):
    s_range = settings.get("s_range", default)
    if not (isinstance(s_range, (list, tuple)) and len(s_range) == 2):
        raise ConfigError("s_range: expected [s0, s1]")
    s0, s1 = (_number({"s_range": v}, "s_range") for v in s_range)
    if not s1 > s0:
        raise ConfigError("s_range: s1 must exceed s0")
    if "step" in settings:
        step = _number(settings, "step", lo=0.0, open_interval=True)
        n = int(round((s1 - s0) / step)) + 1
    else:
        n = numeric.generator_points
    if n < 8:
        raise ConfigError("step: fewer than 8 samples on s_range")
    return (s0, s1), n


def _cylinder(settings, numeric):
    spec = settings.get("cylinder", {})
    base = spec.get("base", "circle")
    if base not in ("circle", "ellipse"):
        raise ConfigError(f"cylinder.base: expected 'circle' or 'ellipse', got {base!r}")
    params = dict(spec.get("params", {}))
    for key, value in params.items():
        _number({f"cylinder.params.{key}": value}, f"cylinder.params.{key}", lo=0.0, open_interval=True)
    axis = np.asarray(spec.get("axis", [0.0, 0.0, 1.0]), dtype=float)
    if axis.shape != (3,) or np.linalg.norm(axis) == 0:
        raise ConfigError("cylinder.axis: expected a nonzero 3-vector")
    return make_cylinder(base, params, axis / np.linalg.norm(axis), config=numeric)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(run: RunConfig) -> int:
    st, numeric = run.settings, run.numeric
    kind = st.get("kind", "general_helix" if "abc" in st else "normal_helix")
    output = run.out / st.get("output", "samples.csv")
    if kind == "normal_helix":
        theta = _number(st, "theta", np.pi / 36, -np.pi / 2, np.pi / 2, open_interval=True)
        cyl = _cylinder(st, numeric)
        s_range, n = _s_grid(st, numeric)
        phi0 = _number(st, "phi0", 0.0, -np.pi / 2, np.pi / 2, open_interval=True)
        g = generate_normal_helix(
            cyl, theta, _number(st, "t0", 0.0), _number(st, "z0", 0.0), phi0, s_range, n, _number(st, "s_init", 0.0), numeric
        )
        columns = {**g.frenet(numeric).columns(), **g.columns()}
    elif kind == "general_helix":
        abc = st.get("abc")
        if not (isinstance(abc, (list, tuple)) and len(abc) == 3):
            raise ConfigError("abc: expected [a, b, c]")
        abc = [_number({"abc": v}, "abc") for v in abc]
        if abc[0] <= 0:
            raise ConfigError("abc: a must be positive (negate the triple)")
        law = st.get("theta", {"theta0": 0.6, "slope": -0.1})
        if not isinstance(law, dict):
            raise ConfigError("theta: expected {\"theta0\": ..., \"slope\": ...} for a general helix")
        th0 = _number(law, "theta0", lo=-np.pi / 2, hi=np.pi / 2, open_interval=True)
        slope = _number(law, "slope", 0.0)
        s_range, n = _s_grid(st, numeric, (-3.0, 3.0))
        g = generate_general_helix(
            *abc, lambda s: th0 + slope * s, s_range, n, theta_prime_fn=lambda s: slope, config=numeric
        )
        columns = {**g.frenet(numeric).columns(), **g.columns()}
    elif kind == "circular_helix":
        params = st.get("params", {})
        r = _number(params, "r", 3.0, lo=0.0, open_interval=True)
        h = _number(params, "h", 4.0)
        turns = _number(params, "turns", 1.0, lo=0.0, open_interval=True)
        curve = circular_helix(r, h, (0.0, 2 * np.pi * turns))
        if "step" in st:
            L = build_arclength_map(curve, config=numeric).total_length
            _, n = _s_grid({"s_range": [0.0, L], "step": st["step"]}, numeric)
        else:
            n = numeric.generator_points
        columns = frenet_series(curve, n=n, config=numeric).columns()
    else:
        raise ConfigError(f"kind: expected normal_helix, general_helix or circular_helix, got {kind!r}")
    write_csv(output, columns)
    write_manifest(run.out, "generate", numeric, None, [output], st)
    print(f"wrote {output} ({len(columns['s'])} rows)")
    return EXIT_OK


def _require_input(run):
    if run.input is None:
        raise ConfigError("input: required (--input or \"input\" in the config)")
    if not run.input.exists():
        raise ConfigError(f"input: {run.input} does not exist")
    return load_curve(run.input, run.numeric)


def cmd_analyze(run: RunConfig) -> int:
    curve = _require_input(run)
    series = frenet_series(curve, config=run.numeric)
    columns = series.columns()
    summary = {
        "length": float(series.s[-1] - series.s[0]),
        "kappa_min": float(series.kappa.min()),
        "kappa_max": float(series.kappa.max()),
        "tau_min": float(series.tau.min()),
        "tau_max": float(series.tau.max()),
        "frenet_serret_residual": float(max(np.max(r) for r in frenet_serret_residuals(series))),
        "darboux_residual": float(np.max(darboux_residuals(series.frame(), series.darboux))),
    }
    w0 = run.settings.get("transport")
    if w0 is not None:
        W0 = np.asarray(w0, dtype=float)
        if W0.shape != (3,):
            raise ConfigError("transport: expected [x, y, z]")
        fc = transport_field(series.frame(), W0, run.numeric)
        columns.update(fc.columns())
        summary["transport_agreement"] = fc.agreement
        summary["transport_length_drift"] = fc.length_drift
    outputs = [write_csv(run.out / "frenet.csv", columns), write_json(run.out / "analysis.json", summary)]
    write_manifest(run.out, "analyze", run.numeric, str(run.input), outputs, run.settings)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_classify(run: RunConfig) -> int:
    curve = _require_input(run)
    series = frenet_series(curve, config=run.numeric)
    result = classify(series, run.numeric)
    outputs = []
    csv_name = None
    if result.residuals is not None:
        csv_name = "residuals.csv"
        outputs.append(write_csv(run.out / csv_name, {"s": result.s, "residual": result.residuals}))
    rep = result.report(csv_name)
    outputs.append(write_json(run.out / "classification.json", rep))
    write_manifest(run.out, "classify", run.numeric, str(run.input), outputs, run.settings)
    print(json.dumps({k: rep[k] for k in ("class", "theta", "abc", "residual_rms")}, sort_keys=True))
    return EXIT_OK


def cmd_dual(run: RunConfig) -> int:
    curve = _require_input(run)
    series = frenet_series(curve, config=run.numeric)
    result = binormal_dual(series, run.numeric)
    outputs = [
        write_csv(run.out / "dual.csv", result.samples.columns()),
        write_json(run.out / "dual.json", result.report()),
    ]
    write_manifest(run.out, "dual", run.numeric, str(run.input), outputs, run.settings)
    print(json.dumps(result.report(), sort_keys=True))
    return EXIT_OK


def cmd_verify_paper(run: RunConfig) -> int:
    from .verification import CHECKS, format_table, report, run_checks

    unknown = [c for c in run.only if c not in CHECKS]
    if unknown:
        raise ConfigError(f"only: unknown check id(s) {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    results = run_checks(run.numeric, run.only or None)
    rep = report(results, run.numeric)
    out = write_json(run.out / "verification.json", rep)
    write_manifest(run.out, "verify-paper", run.numeric, None, [out], {"only": run.only})
    sys.stdout.write(format_table(results))
    failed = [r.check_id for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "dual": cmd_dual,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON settings; numeric overrides go under \"numeric\"")
    common.add_argument("--out", default="out", help="output directory (default: out)")
    common.add_argument("--grid", type=int, help="override n_grid")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a numeric setting (repeatable)")
    parser = argparse.ArgumentParser(prog="genhelix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="sample a helix to CSV")
    for name, text in (("analyze", "Frenet apparatus"), ("classify", "helix classification"), ("dual", "binormal dual")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--input", help="curve-spec JSON or samples CSV")
    p = sub.add_parser("verify-paper", parents=[common], help="run the reproduction checks")
    p.add_argument("--only", action="append", metavar="CHECK", help="run only these check ids (repeatable or comma separated)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = build_run_config(args)
        return COMMANDS[run.command](run)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
