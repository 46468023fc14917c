import random

import pytest

from rainbow_forbid.latin import LatinRectangle, apply_isotopy

CYCLIC3 = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def random_rectangle(rng: random.Random, m: int, n: int) -> LatinRectangle:
    """Random m x n latin rectangle, built row by row with rejection."""
    rows: list[list[int]] = []
    while len(rows) < m:
        row = list(range(n))
        rng.shuffle(row)
        if all(row[j] != prev[j] for prev in rows for j in range(n)):
            rows.append(row)
    return LatinRectangle(tuple(tuple(r) for r in rows))


def random_isotope(rng: random.Random, rect: LatinRectangle) -> LatinRectangle:
    rows, cols, syms = list(range(rect.rows)), list(range(rect.cols)), list(range(rect.cols))
    rng.shuffle(rows)
    rng.shuffle(cols)
    rng.shuffle(syms)
    return apply_isotopy(rect, rows, cols, syms)


@pytest.fixture
def rng():
    return random.Random(20101)


# --- acceptance reporting --------------------------------------------------------

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[label] = ("PASS" if rep.passed else "FAIL", item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        status, name = _criteria[label]
        terminalreporter.write_line(f"[{status}] criterion {label}  ({name})")
