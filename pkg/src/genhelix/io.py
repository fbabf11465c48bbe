"""Deterministic CSV/JSON output and input loading.

Floats are written with 17 significant digits so a file read back gives
bit-identical values, and JSON keys are sorted so equal data give equal
bytes.
"""

import csv
import io
import json
from pathlib import Path

import numpy as np

from . import __version__
from .config import DEFAULT, NumericConfig
from .curvegeom import CurveModel, curve_from_spec

FLOAT_FORMAT = "%.17g"


def format_csv(columns: dict) -> str:
    """Equal-length 1-D columns as CSV text, in insertion order."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    np.savetxt(buf, data, fmt=FLOAT_FORMAT, delimiter=",")
    return buf.getvalue()


def write_csv(path, columns: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(columns))
    return path


def read_csv(path) -> dict:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def write_manifest(out_dir, command: str, config: NumericConfig, inputs=None, outputs=(), settings=None):
    """Echo the resolved configuration next to a run's outputs."""
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "version": __version__,
        "numeric_config": config.to_dict(),
        "inputs": inputs,
        "settings": settings or {},
        "outputs": sorted(Path(p).name for p in outputs),
    }
    return write_json(out_dir / "manifest.json", manifest)


def load_curve(path, config: NumericConfig = DEFAULT) -> CurveModel:
    """Curve from a curve-spec JSON file or a CSV of samples.

    A CSV needs ``x,y,z`` columns and a parameter column, ``s`` when
    present, otherwise ``t``.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        return curve_from_spec(json.loads(path.read_text()), config)
    cols = read_csv(path)
    missing = {"x", "y", "z"} - set(cols)
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    param = "s" if "s" in cols else "t" if "t" in cols else None
    if param is None:
        raise ValueError(f"{path}: needs an 's' or 't' parameter column")
    points = np.column_stack((cols["x"], cols["y"], cols["z"]))
    return CurveModel.from_samples(cols[param], points, config, name=path.stem)
