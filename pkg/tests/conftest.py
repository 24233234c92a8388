import os

import pytest
from hypothesis import HealthCheck, settings

from surfinv.algebra import QQ, NumberField
from surfinv.config import load_config

settings.register_profile(
    "thorough",
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.data_too_large],
)
settings.register_profile("quick", max_examples=50, deadline=None, derandomize=True)
settings.load_profile(os.environ.get("SURFINV_HYPOTHESIS_PROFILE", "thorough"))

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def Qr():
    return NumberField(["10976/625", "1496/675", 1], name="r")


@pytest.fixture(scope="session")
def example_report(cfg):
    from surfinv.pipeline import build_example

    return build_example(cfg)


@pytest.fixture
def QQfield():
    return QQ


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
