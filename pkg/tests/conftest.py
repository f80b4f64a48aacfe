import random
import sys

import pytest

from dyncut.graph import DynamicGraph


def cycle(n):
    return DynamicGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return DynamicGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def two_triangles():
    """Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3."""
    return DynamicGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def random_connected(n, extra, rng):
    g = DynamicGraph(n)
    for v in range(1, n):
        g.insert_edge(v, rng.randrange(v))
    for _ in range(extra):
        u, v = rng.sample(range(n), 2)
        g.insert_edge(u, v)
    return g


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES):
            terminalreporter.write_line(line)
