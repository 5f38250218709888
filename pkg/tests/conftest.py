import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion; returns the verdict."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(criterion: str, ok: bool, detail: str = "") -> bool:
        lines.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
