import pytest

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, report.duration))
    elif report.when == "setup" and report.outcome != "passed" and "acceptance" in report.keywords:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, secs in _ACCEPTANCE:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}  ({secs:.1f}s)")


@pytest.fixture
def stopwatch():
    import time

    class Watch:
        def __init__(self):
            self.elapsed = 0.0

        def __enter__(self):
            self._t = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed += time.perf_counter() - self._t

    return Watch()
