import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = mark.args
        detail = "; ".join(v for k, v in item.user_properties if k == "detail")
        _CRITERIA[number] = (title, report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number:2d}. {title}: {detail}")
    n_ok = sum(ok for _, ok, _ in _CRITERIA.values())
    terminalreporter.write_line(f"{n_ok}/{len(_CRITERIA)} criteria passed")


class Stopwatch:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


@pytest.fixture
def stopwatch():
    return Stopwatch


@pytest.fixture
def report(record_property):
    """Attach a ``label err (tol)`` fragment to the acceptance summary line."""

    def add(label, value, tol=None):
        if label == "seconds":
            text = f"{value:.2f}s (budget {tol:g}s)"
        elif isinstance(value, (int, np.integer)):
            text = f"{label} {value}"
        elif tol is None:
            text = f"{label} {value:.2e}"
        else:
            text = f"{label} {value:.2e} < {tol:.0e}"
        record_property("detail", text)

    return add


@pytest.fixture
def rng():
    return np.random.default_rng(20240514)
