import pytest

from tssbaseline.lexicon import Lexicon, default_lexicon
from tssbaseline.series import Series


@pytest.fixture
def small_lexicon():
    return Lexicon(frozenset({"good", "great", "gain"}), frozenset({"bad", "loss"}))


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


def series(values, start=0):
    return Series(tuple(range(start, start + len(values))), tuple(values))


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    The line is printed immediately and again in the terminal summary, since
    pytest captures output of passing tests.
    """
    def record(number, description, ok, detail=""):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {description}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
