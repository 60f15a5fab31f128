from __future__ import annotations

import pytest

from cognipleasure.appraisal import FuzzConfig
from cognipleasure.rules import load_canonical


@pytest.fixture(scope="session")
def canonical():
    return load_canonical()


@pytest.fixture
def crisp():
    return FuzzConfig(overlap=0.0)


@pytest.fixture(autouse=True)
def _no_env_config(monkeypatch):
    # keep a developer's config from leaking into tests
    monkeypatch.delenv("COGNIPLEASURE_CONFIG", raising=False)


_ACCEPTANCE: dict[str, tuple[str, str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        _ACCEPTANCE[report.nodeid] = (report.outcome, report.nodeid, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    import importlib

    module = importlib.import_module("test_acceptance")
    terminalreporter.section("acceptance criteria")
    for outcome, nodeid, duration in sorted(_ACCEPTANCE.values(), key=lambda r: int(r[1].split("_")[3])):
        fn = getattr(module, nodeid.split("::")[-1])
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {fn.__doc__.strip()}  ({duration:.2f} s)")
