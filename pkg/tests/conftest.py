import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record ``(passed, detail)`` for an acceptance criterion, then assert it."""

    def record(number, title, checks):
        ok = all(passed for passed, _ in checks.values())
        detail = "; ".join(f"{name}: {'ok' if passed else 'FAILED'} ({info})"
                           for name, (passed, info) in checks.items())
        ACCEPTANCE[number] = (ok, title, detail)
        failed = [name for name, (passed, _) in checks.items() if not passed]
        assert not failed, f"criterion {number} failed checks {failed}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
