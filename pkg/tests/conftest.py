"""Shared fixtures and the per-criterion acceptance summary."""
import pytest

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        prev = _acceptance.get(name, "PASS")
        _acceptance[name] = "FAIL" if report.failed or prev == "FAIL" else ("SKIP" if report.skipped else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[1][2:])):
        terminalreporter.write_line(f"{_acceptance[name]:4}  {name}")


@pytest.fixture
def scenario_file(tmp_path):
    def write(text, name="scenario.txt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
