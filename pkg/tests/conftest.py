import pytest

_CRITERIA: dict = {}


@pytest.fixture(scope="session")
def criterion():
    """Record the outcome of a numbered acceptance criterion for the summary."""

    def record(number: int, passed: bool, detail: str):
        _CRITERIA[number] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
