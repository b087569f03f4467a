import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")

F = Fraction


@pytest.fixture(scope="session")
def theta35():
    from ncspaces.families import theta_R
    return theta_R(F(3, 5), F(4, 5))


@pytest.fixture(scope="session")
def r0():
    from ncspaces.families import classical_R
    return classical_R(2, 2)


@pytest.fixture(scope="session")
def quat():
    from ncspaces.families import quaternionic_R
    return quaternionic_R(F(2, 3), [1, 0, 0], [F(2, 3), F(1, 3), 0])


@pytest.fixture(scope="session")
def simple_quat():
    from ncspaces.families import simplified_quaternionic_R
    return simplified_quaternionic_R(F(2, 3), F(2, 3), F(1, 3))


@pytest.fixture(scope="session")
def corpus():
    from ncspaces.corpus import build_corpus
    return build_corpus()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
