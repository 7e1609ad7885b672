import numpy as np
import pytest

from intrinsic_risk import EligibleAsset, Position, ScenarioSpace, VaRSet, ESSet

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "seconds": 0.0, "tests": 0})
    entry["seconds"] += rep.duration
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        verdict = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(
            f"{verdict}  criterion {number}: {e['title']}  ({e['tests']} checks, {e['seconds']:.2f}s)"
        )


@pytest.fixture
def space4():
    return ScenarioSpace.uniform(4)


@pytest.fixture
def demo(space4):
    """Four equally likely scenarios, a lossy position and a riskless asset."""
    x = Position(10.0, space4.payoff([-10, -2, 1, 5]))
    s = EligibleAsset(1.0, space4.constant(1.0))
    return x, s


@pytest.fixture
def var25(space4):
    return VaRSet(space4, 0.25)


@pytest.fixture
def es50(space4):
    return ESSet(space4, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
