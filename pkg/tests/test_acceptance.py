"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines; the
verification tables are also written to the pytest captured output.
"""

import subprocess
import sys

import pytest

from genhelix.verification import run_check

CRITERIA = [
    (1, "closed-form-curvature", "closed-form curvature and torsion of the circular-cylinder normal helix"),
    (2, "generator-closed-form", "ODE generator against closed-form slope, base and height"),
    (3, "normal-law", "normal-helix natural equation and wrong-angle margin"),
    (4, "axis-reconstruction", "axis drift, orthogonality and alignment with the cylinder"),
    (5, "transport", "frame-constant transport over ten turns"),
    (6, "darboux", "angular-velocity identities of the Frenet frame"),
    (7, "duality", "binormal dual swaps curvature and torsion"),
    (8, "rectifying", "rectifying verdict fires exactly when rho' vanishes"),
    (9, "reduction-table", "general law reduces to each special law"),
    (10, "inverse-problem", "recovery of (a, b, c) and of the normal angle"),
    (11, "angle-constancy", "constant normal angle and geodesic zero angle"),
]


def _line(number, ok, text, detail=""):
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {text}"
    print(line + (f" :: {detail}" if detail else ""))


@pytest.mark.parametrize("number,check_id,text", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(number, check_id, text, config):
    result = run_check(check_id, config)
    worst = "; ".join(f"{m.name}={m.value:.3e}" for m in result.measurements if not m.passed)
    _line(number, result.passed, text, result.error or worst)
    for m in result.measurements:
        print(f"    {'ok ' if m.passed else 'BAD'} {m.name}: {m.value:.3e} ({m.relation} {m.tol:.1e})")
    assert result.passed, result.error or worst


def _verify(out_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "genhelix", "verify-paper", "--out", str(out_dir)],
        capture_output=True,
        text=True,
    )
    return proc, (out_dir / "verification.json").read_bytes()


def test_criterion_12_determinism(tmp_path):
    first, a = _verify(tmp_path / "run1")
    second, b = _verify(tmp_path / "run2")
    manifests_equal = (tmp_path / "run1" / "manifest.json").read_bytes() == (tmp_path / "run2" / "manifest.json").read_bytes()
    ok = a == b and manifests_equal and first.stdout == second.stdout and first.returncode == second.returncode == 0
    _line(12, ok, "two verification runs give byte-identical reports", f"exit codes {first.returncode}, {second.returncode}")
    assert a == b
    assert manifests_equal
    assert first.returncode == 0, first.stdout + first.stderr
