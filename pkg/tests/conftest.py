import pytest

from foldcover import checks


@pytest.fixture(scope="session")
def dragon7():
    return checks.dragon_cover(7)


@pytest.fixture(scope="session")
def example9_7():
    return checks.example9_cover(7)


@pytest.fixture(scope="session")
def alt_six():
    return checks.alternating_six(2)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CHECK_LINES
    if CHECK_LINES:
        terminalreporter.section("acceptance checks")
        for line in CHECK_LINES:
            terminalreporter.write_line(line)
