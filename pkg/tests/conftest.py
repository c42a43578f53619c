import os

import pytest

DATA = os.path.join(os.path.dirname(__file__), "data")

# Acceptance results collected by tests/test_acceptance.py, printed once at the end.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
