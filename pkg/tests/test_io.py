import json

import numpy as np
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from genhelix.config import DEFAULT
from genhelix.curvegeom import frenet_series
from genhelix.io import dumps, format_csv, load_curve, read_csv, write_csv, write_manifest

finite = st.floats(allow_nan=False, allow_infinity=False)


@given(arrays(np.float64, st.integers(1, 20), elements=finite))
def test_csv_round_trip_is_bit_exact(tmp_path_factory, values):
    path = tmp_path_factory.mktemp("csv") / "a.csv"
    write_csv(path, {"s": values, "x": -values})
    back = read_csv(path)
    assert np.array_equal(back["s"], values) and np.array_equal(back["x"], -values)


def test_csv_keeps_column_order():
    text = format_csv({"b": [1.0], "a": [2.0]})
    assert text.splitlines()[0] == "b,a"


def test_json_is_canonical():
    a = dumps({"b": np.float64(0.1), "a": np.arange(2)})
    b = dumps({"a": [0, 1], "b": 0.1})
    assert a == b
    assert json.loads(a) == {"a": [0, 1], "b": 0.1}


def test_manifest_echoes_config(tmp_path):
    path = write_manifest(tmp_path, "analyze", DEFAULT, "in.csv", [tmp_path / "z.csv", tmp_path / "a.json"], {"k": 1})
    data = json.loads(path.read_text())
    assert data["numeric_config"] == DEFAULT.to_dict()
    assert data["outputs"] == ["a.json", "z.csv"]


def test_load_curve_from_csv_and_spec(tmp_path):
    t = np.linspace(0, 4 * np.pi, 800)
    write_csv(tmp_path / "h.csv", {"t": t, "x": 3 * np.cos(t), "y": 3 * np.sin(t), "z": 4 * t})
    series = frenet_series(load_curve(tmp_path / "h.csv"), n=256)
    assert np.max(np.abs(series.kappa - 0.12)) < 1e-5
    (tmp_path / "c.json").write_text(json.dumps({"kind": "analytic", "name": "circle", "params": {"R": 2}}))
    assert np.allclose(frenet_series(load_curve(tmp_path / "c.json"), n=32).kappa, 0.5)
