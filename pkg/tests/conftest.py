import pytest

from metablock.core import GroupParams


@pytest.fixture
def D27():
    return GroupParams(3, 2, 1, 1)


@pytest.fixture
def D125():
    return GroupParams(5, 2, 1, 1)


@pytest.fixture
def D243():
    return GroupParams(3, 3, 2, 2)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
