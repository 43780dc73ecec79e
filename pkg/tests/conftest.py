import pytest

from rotforge.costs import build_cost_table


@pytest.fixture(scope="session")
def table14():
    """Cost table to level 14 at raw error 1e-3, shared across test modules."""
    return build_cost_table(14, 1e-3)


@pytest.fixture(scope="session")
def table36():
    """The full sweep range at raw error 1e-3."""
    return build_cost_table(36, 1e-3)


@pytest.fixture(scope="session")
def table6_1e2():
    return build_cost_table(6, 1e-2)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(capsys):
    """Record and print one PASS/FAIL line, then fail the test if the check did."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
