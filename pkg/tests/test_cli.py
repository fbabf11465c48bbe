import json

import numpy as np
import pytest

from genhelix.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, EXIT_VERIFY, main
from genhelix.io import read_csv

NORMAL = {"cylinder": {"base": "circle", "params": {"R": 1.0}}, "theta": np.pi / 36, "s_range": [-10, 10], "output": "helix.csv"}


def _config(tmp_path, data, name="gen.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("gen")
    code = main(["generate", "--config", _config(tmp, NORMAL), "--out", str(tmp / "out")])
    return code, tmp / "out"


def test_generate_normal_helix(generated):
    code, out = generated
    assert code == EXIT_OK
    cols = read_csv(out / "helix.csv")
    assert len(cols["s"]) == 4096
    assert list(cols)[-4:] == ["t", "z_cyl", "phi", "theta"]
    assert {"Tx", "Nz", "kappa", "tau", "Dx"} <= set(cols)
    assert np.allclose(cols["theta"], np.pi / 36)
    assert json.loads((out / "manifest.json").read_text())["command"] == "generate"


def test_generate_circular_helix(tmp_path):
    cfg = _config(tmp_path, {"kind": "circular_helix", "params": {"r": 3, "h": 4}})
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    cols = read_csv(tmp_path / "samples.csv")
    assert np.allclose(cols["kappa"], 0.12, atol=1e-12) and np.allclose(cols["tau"], 0.16, atol=1e-12)


def test_generate_general_helix_with_step(tmp_path):
    cfg = _config(tmp_path, {"abc": [1, 1, 1], "theta": {"theta0": 0.6, "slope": -0.1}, "s_range": [-3, 3], "step": 0.005})
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_OK
    assert len(read_csv(tmp_path / "samples.csv")["s"]) == 1201


@pytest.mark.parametrize(
    "data,field",
    [
        ({"theta": np.pi / 2}, "theta"),
        ({"theta": 0.1, "s_range": [3, 1]}, "s_range"),
        ({"theta": 0.1, "cylinder": {"base": "hexagon"}}, "cylinder.base"),
        ({"abc": [1, 1]}, "abc"),
        ({"kind": "spiral"}, "kind"),
    ],
)
def test_generate_config_errors_name_the_field(tmp_path, capsys, data, field):
    assert main(["generate", "--config", _config(tmp_path, data), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert capsys.readouterr().err.startswith(f"error: {field}")


def test_generate_numerical_failure(tmp_path, capsys):
    cfg = _config(tmp_path, {"theta": 1.4, "s_range": [-400, 400]})
    assert main(["generate", "--config", cfg, "--out", str(tmp_path)]) == EXIT_NUMERIC
    assert "SlopeBlowup" in capsys.readouterr().err


def test_unknown_tolerance_is_a_config_error(tmp_path):
    assert main(["generate", "--tol", "bogus=1", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["generate", "--tol", "tol_law", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_classify_generated_file(generated, tmp_path):
    _, out = generated
    assert main(["classify", "--input", str(out / "helix.csv"), "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "classification.json").read_text())
    assert report["class"] == "normal"
    assert report["theta"] == pytest.approx(0.0873, abs=1e-4)
    assert report["per_sample_residuals_csv"] == "residuals.csv"
    assert len(read_csv(tmp_path / "residuals.csv")["residual"]) == 2048


def test_classify_plane_circle(tmp_path):
    spec = _config(tmp_path, {"kind": "analytic", "name": "circle", "params": {"R": 2}}, "circle.json")
    assert main(["classify", "--input", spec, "--out", str(tmp_path)]) == EXIT_OK
    assert json.loads((tmp_path / "classification.json").read_text())["class"] == "plane"
    assert main(["dual", "--input", spec, "--out", str(tmp_path)]) == EXIT_NUMERIC


def test_classify_needs_input(tmp_path):
    assert main(["classify", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["classify", "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_analyze_with_transport(generated, tmp_path):
    _, out = generated
    cfg = _config(tmp_path, {"transport": [1, 0, 0]})
    assert main(["analyze", "--config", cfg, "--input", str(out / "helix.csv"), "--out", str(tmp_path)]) == EXIT_OK
    summary = json.loads((tmp_path / "analysis.json").read_text())
    assert summary["length"] == pytest.approx(20.0)
    assert summary["transport_agreement"] < 1e-7
    assert list(read_csv(tmp_path / "frenet.csv"))[-3:] == ["Wx", "Wy", "Wz"]


def test_dual_of_circular_helix(tmp_path):
    spec = _config(tmp_path, {"kind": "analytic", "name": "circular_helix", "params": {"r": 3, "h": 4}}, "h.json")
    assert main(["dual", "--input", spec, "--out", str(tmp_path)]) == EXIT_OK
    cols = read_csv(tmp_path / "dual.csv")
    assert np.max(np.abs(cols["kappa"] - 0.16)) < 1e-5
    assert max(json.loads((tmp_path / "dual.json").read_text()).values()) < 1e-5


def test_verify_single_check(tmp_path, capsys):
    assert main(["verify-paper", "--only", "normal-law", "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "verification.json").read_text())
    assert [c["id"] for c in report["checks"]] == ["normal-law"]
    assert "[PASS] normal-law" in capsys.readouterr().out


def test_verify_unknown_check(tmp_path):
    assert main(["verify-paper", "--only", "nope", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_verify_coarse_grid_fails(tmp_path, capsys):
    code = main(["verify-paper", "--grid", "64", "--only", "normal-law,transport,darboux", "--out", str(tmp_path)])
    assert code == EXIT_VERIFY
    out = capsys.readouterr().out
    assert "[FAIL]" in out
    report = json.loads((tmp_path / "verification.json").read_text())
    assert report["passed"] is False
    assert report["numeric_config"]["n_grid"] == 64


def test_generate_is_byte_deterministic(tmp_path):
    cfg = _config(tmp_path, dict(NORMAL, s_range=[-2, 2]))
    for run in ("a", "b"):
        assert main(["generate", "--config", cfg, "--grid", "256", "--out", str(tmp_path / run)]) == EXIT_OK
    for name in ("helix.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
