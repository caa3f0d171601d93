import pytest

from pseudoboson.family import family_at

_ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one summary line per acceptance criterion for the terminal report."""

    def _record(number, title, passed, detail=""):
        _ACCEPTANCE[number] = (title, passed, detail)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}  {detail}")


@pytest.fixture(scope="session")
def oscillator_family():
    """eta = 0, epsilon = 1: a rescaled copy of the oscillator basis."""
    return family_at(1.0, 0.0, 20)


@pytest.fixture(scope="session")
def generic_family():
    return family_at(0.3, 0.1, 20)


@pytest.fixture(scope="session")
def alpha3_family():
    return family_at(0.45, 0.15, 20)
