import pytest

from evals import case_loader
from utils.telemetry import load_events

GOLDEN = case_loader.cases_for_suite("golden")


def test_golden_suite_is_not_empty():
    assert len(GOLDEN) >= 10
    assert all(case["runner"] in {"cli", "cli_deterministic"} for case in GOLDEN)


@pytest.mark.parametrize("case", GOLDEN, ids=[case["id"] for case in GOLDEN])
def test_golden_case(case):
    result = case_loader.run_case(case)
    failed = [c for c in result["checks"] if not c["passed"]]
    assert result["passed"], failed


def test_unknown_suite_reports_not_found():
    result = case_loader.run_suite("no_such_suite")
    assert result["status"] == 404
    assert result["error"]["code"] == "suite_not_found"


def test_matches_compares_expected_keys_only():
    assert case_loader.matches({"a": 1}, {"a": 1, "b": 2})
    assert not case_loader.matches({"a": {"b": 1}}, {"a": {"b": 2}})
    assert not case_loader.matches([1, 2], [1, 2, 3])


def test_case_run_is_logged(telemetry_sink):
    case = case_loader.cases_for_suite("cartan_2_2")[0]
    case_loader.run_case(case, run_id="run_fixed")
    events = [e for e in load_events(telemetry_sink) if e.get("run_id") == "run_fixed"]
    kinds = [e["event_type"] for e in events]
    assert kinds[0] == "eval_case_started"
    assert kinds[-1] == "eval_case_completed"
    assert "job_completed" in kinds
    assert events[-1]["passed"] is True
