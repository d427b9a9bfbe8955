import os
import sys
import time
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("default")

_CRITERIA: dict[int, str] = {}


@contextmanager
def _criterion(number: int, title: str, limit_s: float):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        status = "PASS" if elapsed < limit_s else "FAIL (time)"
    finally:
        elapsed = time.perf_counter() - start
        _CRITERIA[number] = f"criterion {number} {status:<11} {elapsed:7.2f}s / {limit_s:g}s  {title}"
    assert elapsed < limit_s, f"took {elapsed:.1f}s, limit {limit_s}s"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
