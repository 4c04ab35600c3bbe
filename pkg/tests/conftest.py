import numpy as np
import pytest

_CRITERIA: dict[str, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _CRITERIA.setdefault(value, []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", f"{mark.args[0]:>3}  {mark.args[1]}"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: int(s.split()[0].strip("C"))):
        outcomes = _CRITERIA[name]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
