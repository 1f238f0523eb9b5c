import itertools
import random

import pytest

from recshacl import load_example, parse_graph, parse_schema
from recshacl.generate import random_instance

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def covid():
    return parse_graph(load_example("covid.graph"))


@pytest.fixture(scope="session")
def at_risk():
    return parse_schema(load_example("at_risk.shacl"))


@pytest.fixture(scope="session")
def safe():
    return parse_schema(load_example("safe.shacl"))


@pytest.fixture(scope="session")
def batch():
    """200 random recursive instances with at most 3 shapes and 3 nodes."""
    rng = random.Random(20211)
    return [random_instance(rng) for _ in range(200)]


def consistent_pairs(n_shapes: int, size: int):
    """Every consistent (lower, upper) mask pair over n_shapes x size atoms."""
    for values in itertools.product((0, 1, 2), repeat=n_shapes * size):
        lo, hi = [0] * n_shapes, [0] * n_shapes
        for idx, v in enumerate(values):
            i, x = divmod(idx, size)
            if v >= 1:
                hi[i] |= 1 << x
            if v == 2:
                lo[i] |= 1 << x
        yield tuple(lo), tuple(hi)


def all_assignments(n_shapes: int, size: int):
    return itertools.product(range(1 << size), repeat=n_shapes)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
