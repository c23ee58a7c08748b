from functools import lru_cache

import pytest

from circle_ekr.cli import build_geometry


@lru_cache(maxsize=None)
def geometry(family: str, q: int, model: str | None = None):
    return build_geometry(family, q, model)


@pytest.fixture
def geo():
    return geometry


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_runtest_logreport(report):
    num = getattr(report, "criterion", None)
    if num is None:
        return
    title = report.criterion_title
    prev = _CRITERIA.get(num, (title, "PASS"))[1]
    failed = report.failed or (report.when == "call" and report.outcome != "passed")
    _CRITERIA[num] = (title, "FAIL" if failed or prev == "FAIL" else "PASS")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep = outcome.get_result()
        rep.criterion, rep.criterion_title = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d} {status}: {title}")
