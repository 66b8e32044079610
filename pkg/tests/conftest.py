import contextlib

import pytest

# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def record(number: int, title: str):
        notes: list[str] = []
        try:
            yield notes
        except BaseException:
            ACCEPTANCE[number] = f"criterion {number} FAIL  {title}  {'; '.join(notes)}"
            print(ACCEPTANCE[number])
            raise
        ACCEPTANCE[number] = f"criterion {number} PASS  {title}  {'; '.join(notes)}"
        print(ACCEPTANCE[number])
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
