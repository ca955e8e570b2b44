import pytest

# criterion number -> (passed, detail), filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record named checks for one acceptance criterion and assert them all."""

    def check(number, checks):
        failed = [name for name, ok in checks if not ok]
        detail = "; ".join(name for name, _ in checks) if not failed else "failed: " + "; ".join(failed)
        ACCEPTANCE[number] = (not failed, detail)
        assert not failed, f"criterion {number}: " + "; ".join(failed)

    return check


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
