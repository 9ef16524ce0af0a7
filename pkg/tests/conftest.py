import json
from pathlib import Path

import pytest

from semgraph.graph import Graph

DATA = Path(__file__).parent / "data"

DEMO_TOKENS = ["The", "boy", "wants", "the", "girl", "to", "believe", "him"]


def build_demo_graph() -> Graph:
    """The worked example used across the suite: 'The boy wants the girl
    to believe him', annotated bottom-up so that ids come out in the
    order want, boy, girl, believe."""
    g = Graph(tid="demo.1", annotator="ID",
              last_saved="04/17/2021 11:23:42", tokens=list(DEMO_TOKENS))
    g.add_concept("want-01", [2])       # c0
    g.add_concept("boy", [1, 7])        # c1
    g.add_concept("girl", [4])          # c2
    g.add_concept("believe-01", [6])    # c3
    g.add_relation("c0", "c1", "ARG0")  # r0
    g.add_relation("c0", "c3", "ARG1")  # r1
    g.add_relation("c3", "c2", "ARG0")  # r2
    g.add_relation("c3", "c1", "ARG1")  # r3: auto-upgraded to a re-entrancy
    return g


@pytest.fixture
def demo_graph() -> Graph:
    return build_demo_graph()


@pytest.fixture
def demo_json_dict() -> dict:
    return json.loads((DATA / "demo.json").read_text())


@pytest.fixture
def demo_penman_text() -> str:
    return (DATA / "demo.penman").read_text()
