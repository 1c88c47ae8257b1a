import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> list of (test id, outcome, details)
_CRITERIA: dict = {}
_TITLES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "setup" and not rep.failed and not rep.skipped:
        return
    if rep.when == "teardown" and not rep.failed:
        return
    number, title = mark.args
    _TITLES[number] = title
    details = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    if hasattr(rep, "wasxfail"):
        status = "FAIL"
        reason = str(call.excinfo.value) if call.excinfo else rep.wasxfail
        details = f"{rep.wasxfail}: {reason}"
    elif rep.passed:
        status = "PASS"
    elif rep.skipped:
        status = "FAIL"
        details = f"skipped: {rep.longrepr[2] if isinstance(rep.longrepr, tuple) else rep.longrepr}"
    else:
        status = "FAIL"
        msg = call.excinfo.exconly().splitlines()[0] if call.excinfo else "failed"
        details = f"{details}; {msg}" if details else msg
    _CRITERIA.setdefault(number, []).append((item.name, status, details))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        status = "PASS" if all(s == "PASS" for _, s, _ in parts) else "FAIL"
        tr.write_line(f"criterion {number} {status}: {_TITLES[number]}")
        for name, s, details in parts:
            tr.write_line(f"    {s} {name}" + (f" ({details})" if details else ""))
