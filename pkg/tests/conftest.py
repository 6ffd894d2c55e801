from __future__ import annotations

from pathlib import Path

import pytest

from relprov.gitlog import parse_log_stream
from relprov.graph import build_graph
from relprov.issues import load_issues_json

FIXTURES = Path(__file__).resolve().parent / "fixtures"

_acceptance_results: list[tuple[str, bool, str]] = []


def load_fixture_graph(name: str, with_issues: bool = True):
    records = parse_log_stream((FIXTURES / f"{name}.log").read_bytes())
    issues_path = FIXTURES / f"{name}.json"
    issues = load_issues_json(issues_path) if with_issues and issues_path.exists() else []
    return build_graph(records, issues)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def merge_history():
    return load_fixture_graph("merge_history")


@pytest.fixture(scope="session")
def patch_release():
    return load_fixture_graph("patch_release")


@pytest.fixture
def acceptance(request):
    """Record the outcome of an acceptance criterion for the summary table."""
    label = request.node.get_closest_marker("criterion").args[0]
    outcome = {"detail": ""}
    yield outcome
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _acceptance_results.append((label, passed, outcome["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    report = (yield).get_result()
    if report.when == "call":
        item.rep_call = report


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion this test gates")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in sorted(_acceptance_results):
        status = "PASS" if passed else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{status}  {label}{suffix}")
