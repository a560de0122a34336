import pytest

# (criterion, status, detail) lines recorded by the acceptance tests
ACCEPTANCE_LINES: list[tuple[str, str, str]] = []


@pytest.fixture
def criterion():
    def record(name, status, detail=""):
        ACCEPTANCE_LINES.append((name, status, detail))
        print(f"criterion {name}: {status} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in sorted(ACCEPTANCE_LINES, key=lambda x: (int(x[0].rstrip("ab")), x[0])):
        terminalreporter.write_line(f"{status:6s} criterion {name}: {detail}")
