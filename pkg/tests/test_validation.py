import numpy as np
import pytest

from cqnc import validation


@pytest.fixture
def rng():
    return np.random.default_rng(11)


@pytest.mark.parametrize("check", validation.CHECKS, ids=lambda c: c.__name__)
def test_each_check_passes(check, rng):
    result = check(rng)
    assert result.passed, result.as_dict()


def test_report_schema():
    report = validation.run_all(seed=1)
    assert report["schema_version"] == validation.SCHEMA_VERSION
    assert report["passed"]
    assert [c["check"] for c in report["checks"]] == [
        "conjugate_symmetry", "spectrum_positivity", "oracle_equivalence", "sql_optimality",
        "cqnc_monotonicity", "cancellation_scaling", "thermal_linearity",
    ]


@pytest.mark.parametrize("mismatch", [0.5, 0.9, 1.5])
def test_mismatch_breaks_cancellation(mismatch):
    drop, bound = validation.cancellation_drop(mismatch)
    assert drop < 2.0 < bound


def test_matched_cancellation_drop():
    drop, bound = validation.cancellation_drop()
    assert bound <= drop <= 1e4
