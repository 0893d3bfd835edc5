import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Record ``(criterion, passed, seconds, note)`` for the acceptance summary."""

    def _record(number, passed, seconds, note=""):
        ACCEPTANCE[number] = (passed, seconds, note)

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, seconds, note = ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status} ({seconds:.2f}s) {note}".rstrip())
