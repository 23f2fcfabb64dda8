import pytest

from quadapn import field as fld

# criterion number -> (status, title, detail); filled by test_acceptance
CRITERIA = {}


@pytest.fixture(scope="session")
def ctx3():
    return fld.make_field(3)


@pytest.fixture(scope="session")
def ctx4():
    return fld.make_field(4)


@pytest.fixture(scope="session")
def ctx5():
    return fld.make_field(5)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status, title, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({detail})")
