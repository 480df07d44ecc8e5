import sys

import pytest

from blockhole.graph import add_inverses, build_graph

# three generations of a small family tree; two of Elizabeth's children are unnamed
ROYAL_TRIPLES = [
    ("Elizabeth", "motherOf", "Charles"),
    ("Elizabeth", "motherOf", "Anon1"),
    ("Elizabeth", "motherOf", "Andrew"),
    ("Elizabeth", "motherOf", "Anon2"),
    ("Charles", "fatherOf", "William"),
    ("Charles", "fatherOf", "Harry"),
    ("Andrew", "fatherOf", "Beatrice"),
    ("Andrew", "fatherOf", "Eugenie"),
    ("Charles", "brotherOf", "Andrew"),
    ("William", "brotherOf", "Harry"),
]


@pytest.fixture
def royal():
    return add_inverses(build_graph(ROYAL_TRIPLES))


@pytest.fixture
def royal_plain():
    return build_graph(ROYAL_TRIPLES)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
