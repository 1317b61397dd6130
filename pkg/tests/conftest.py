from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kirillov.catalog import entry

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

F = Fraction

rationals = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)


def vectors(n):
    return st.lists(rationals, min_size=n, max_size=n).map(tuple)


def vec(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture(scope="session")
def h3():
    return entry("heisenberg3").algebra()


@pytest.fixture(scope="session")
def h5():
    return entry("heisenberg5").algebra()


@pytest.fixture(scope="session")
def n4():
    return entry("n4").algebra()


@pytest.fixture(scope="session")
def free2():
    return entry("free2").algebra()


@pytest.fixture(scope="session")
def sign3(h3):
    return entry("heisenberg3").involution("sign", h3)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.SUMMARY:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.SUMMARY:
        terminalreporter.write_line(line)
