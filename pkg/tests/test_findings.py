import json

import numpy as np

from cr_discs.errors import NoGoodDiscError, StageError
from cr_discs.findings import ExperimentResults, Finding, FindingType, Severity
from cr_discs.runner import failed_results


def make_results(findings=None, tables=None):
    payload = {
        "defect": np.int64(0),
        "errors": np.array([1e-3, 2.5e-4]),
        "value": complex(1.0, -0.5),
    }
    manifest = {"tool": "cr-discs", "version": "0.1.0", "config_sha256": "0" * 64}
    return ExperimentResults("defect", payload, findings or [], manifest, tables)


def test_results_json_serialization():
    results = make_results()
    parsed = json.loads(results.to_json())
    assert parsed["experiment"] == "defect"
    assert parsed["payload"]["defect"] == 0
    assert parsed["payload"]["errors"] == [1e-3, 2.5e-4]
    assert parsed["payload"]["value"] == [1.0, -0.5]
    assert parsed["findings"] == []
    assert parsed["manifest"]["tool"] == "cr-discs"


def test_json_is_deterministic():
    first = make_results().to_json()
    second = make_results().to_json()
    assert first == second
    assert list(json.loads(first)) == sorted(json.loads(first))
    assert "timestamp" not in first


def test_status_logic():
    """Test the status field for different sets of findings."""
    results = make_results()
    assert results.status == "All checks passed"
    assert not results.has_findings()

    diagnostic = Finding(FindingType.THIN_MARGIN, Severity.MEDIUM, "cone margin 0.05", stage="wedge")
    results = make_results([diagnostic])
    assert results.status == "Checks passed with diagnostics"
    assert not results.has_failures()

    failed = Finding(FindingType.CHECK_FAILED, Severity.HIGH, "defect 1 differs from the expected 0")
    results = make_results([diagnostic, failed])
    assert results.status == "Checks failed"
    assert results.has_failures()
    assert "[high] check_failed" in results.summary()


def test_finding_to_dict():
    finding = Finding(FindingType.INDETERMINATE_RANK, Severity.MEDIUM, "near threshold", "defect", {"gap": 1e-7})
    assert finding.to_dict() == {
        "type": "indeterminate_rank",
        "severity": "medium",
        "description": "near threshold",
        "stage": "defect",
        "metadata": {"gap": 1e-7},
    }


def test_save_json_and_tables(tmp_path):
    tables = {"convergence": (["tau", "error"], [["10.0", "0.025"], ["40.0", "0.00625"]])}
    results = make_results(tables=tables)
    results.save_json(str(tmp_path / "defect.json"))
    assert json.loads((tmp_path / "defect.json").read_text())["status"] == "All checks passed"

    paths = results.save_tables(str(tmp_path), prefix="defect-quadric")
    assert paths == [str(tmp_path / "defect-quadric_convergence.csv")]
    assert (tmp_path / "defect-quadric_convergence.csv").read_text() == "tau,error\n10.0,0.025\n40.0,0.00625\n"


def test_failed_results_keep_stage_and_exit_code():
    error = StageError("good_disc", NoGoodDiscError("no disc within 0.02 avoids N", {"candidates": 65}))
    results = failed_results("remove", error)
    assert results.has_failures()
    assert results.payload["exit_code"] == 2
    assert results.findings[0].stage == "good_disc"
    assert results.findings[0].severity is Severity.CRITICAL
    assert results.payload["error"]["details"]["candidates"] == 65
