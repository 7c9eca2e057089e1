import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def report(request):
    """Record one acceptance line: report(number, title, passed, detail)."""
    lines = request.config.stash[_LINES]

    def emit(number, title, passed, detail=""):
        tag = "PASS" if passed else "FAIL"
        lines.append(f"[{tag}] criterion {number:>2} {title}: {detail}")
        return passed

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_LINES]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
