import random

import pytest

from boxpers.fieldlin import FieldSpec

FIELDS = [FieldSpec.gf(2), FieldSpec.gf(5), FieldSpec.rationals()]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param

ACCEPTANCE_LINES: list[str] = []


def record(number: int, name: str, ok: bool, elapsed: float, limit: float | None = None, detail: str = "") -> None:
    """Keep one pass/fail line per acceptance criterion for the end-of-run summary."""
    timing = f"{elapsed:.1f} s" + (f" / limit {limit:.0f} s" if limit else "")
    line = f"criterion {number:>2} {name}: {'PASS' if ok else 'FAIL'} ({timing}){' ' + detail if detail else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
