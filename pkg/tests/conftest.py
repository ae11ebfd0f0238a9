import random

import pytest

from eyefree.igraph import BLUE, GREEN, RED, WHITE, IGraph


def random_igraph(rng: random.Random, n: int, white: bool = False) -> IGraph:
    cols = (RED, BLUE, GREEN, WHITE) if white else (RED, BLUE, GREEN)
    return IGraph.from_upper(n, [rng.choice(cols) for _ in range(n * (n - 1) // 2)])


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance reporting: one line per criterion at the end of the run

ACCEPTANCE_NOTES: dict[str, list[str]] = {}
_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture
def note(request):
    lines = ACCEPTANCE_NOTES.setdefault(request.node.name, [])
    return lines.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.name.startswith("test_criterion_") and (rep.when == "call" or rep.outcome != "passed"):
        _ACCEPTANCE_RESULTS[item.name] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS, key=lambda s: int(s.split("_")[2])):
        number = int(name.split("_")[2])
        terminalreporter.write_line(f"criterion {number:2d}: {_ACCEPTANCE_RESULTS[name]}  ({name})")
        for line in ACCEPTANCE_NOTES.get(name, []):
            terminalreporter.write_line(f"    {line}")
