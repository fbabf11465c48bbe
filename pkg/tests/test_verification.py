import pytest

from genhelix.config import DEFAULT
from genhelix.verification import CHECKS, CheckResult, Measurement, format_table, reduction_table, report, run_checks


def test_measurement_relations():
    assert Measurement("x", 1e-9, 1e-8).passed
    assert not Measurement("x", 0.01, 0.05, ">=").passed
    assert Measurement("x", 0.0, 0.0, "==").passed
    assert not Measurement("x", float("nan"), 1.0).passed


def test_failed_check_is_reported():
    bad = CheckResult("demo", "demo check", [Measurement("err", 2.0, 1.0)])
    broken = CheckResult("boom", "raises", error="GridTooCoarse: too coarse")
    text = format_table([bad, broken])
    assert "[FAIL] demo" in text and "BAD err" in text and "error: GridTooCoarse" in text
    assert report([bad], DEFAULT)["passed"] is False


def test_unknown_check_id():
    with pytest.raises(KeyError):
        run_checks(DEFAULT, ["nope"])


def test_check_ids_are_unique_and_descriptive():
    assert len(CHECKS) == 12
    assert all(cid == cid.lower() and " " not in cid for cid in CHECKS)


def test_reduction_table_verdicts_agree():
    rows = reduction_table(DEFAULT)
    assert len(rows) == 36
    assert all(general == special for _, _, general, special, _ in rows)
    assert max(err for *_, err in rows) < 1e-12
