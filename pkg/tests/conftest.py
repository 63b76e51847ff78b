import warnings

import numpy as np
import pytest

from rwlab.initial_data import gaussian_bump
from rwlab.solver import Grid, SolverConfig, simulate
from rwlab.wavespeed import constant_speed, tanh_speed


@pytest.fixture(scope="session")
def tanh21():
    return tanh_speed(2.0, 1.0)


@pytest.fixture(scope="session")
def const2():
    return constant_speed(2.0)


@pytest.fixture(scope="session")
def small_lambda0_run(tanh21):
    """Cheap certified-style run: lambda = 0, mixed-sign Gaussian data."""
    grid = Grid(-20.0, 20.0, 1000)
    data = gaussian_bump(1.0, 0.0, 2.0, 0.5, grid.x)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return simulate(data, grid, tanh21, SolverConfig(t_end=3.0, output_every=5))


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


# ---- acceptance reporting: one PASS/FAIL line per criterion ----

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed and not rep.skipped):
        return
    number, title = mark.args
    status = "PASS" if rep.passed else ("FAIL" if rep.failed else "NOTE")
    detail = dict(item.user_properties).get("detail", "")
    prev = _CRITERIA.get(number)
    if prev is None or prev[1] == "PASS":
        _CRITERIA[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[number]
        line = f"criterion {number:>2}: {status}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
