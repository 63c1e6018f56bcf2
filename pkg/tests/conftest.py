import numpy as np
import pytest

from pentamotion.design import classify
from pentamotion.selfmotion import SelfMotion
from pentamotion.tolerance import reset_tolerance

# worked example used throughout: (A, C, a_r, a_c, a4)
DESIGN_E = (-1.0, -5.0, 7.0, 4.0, 2.0)
H_E = (1.0, 1.5, 0.5)
P5_E = 527538 / 82369

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(autouse=True)
def _fresh_tolerance():
    reset_tolerance()
    yield
    reset_tolerance()


@pytest.fixture(scope="session")
def design_e():
    return classify(*DESIGN_E)


@pytest.fixture(scope="session")
def motion_e(design_e):
    return SelfMotion.from_h(design_e, H_E)


@pytest.fixture(scope="session")
def poses_e(motion_e):
    return motion_e.trace(200)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
