from coopnet.validation import CheckResult, run_validation_suite


def test_check_result_passes_within_tolerance():
    assert CheckResult("close", 1.0005, 1.0, 1e-3).passed
    assert not CheckResult("far", 1.1, 1.0, 1e-3).passed


def test_deterministic_checks_pass():
    frame = run_validation_suite(thresholds=(0.5, 2.0), samples=0)
    assert list(frame.columns) == ["check", "value", "expected", "tolerance", "passed"]
    assert frame["passed"].all(), frame.loc[~frame["passed"]].to_string()
    assert "no_coop_matches_reference_T=2" in set(frame["check"])
