from __future__ import annotations

import networkx as nx
import pytest

from twinwidth.graph_core import OrderedGraph

ACCEPTANCE_LINES: list = []


def record_acceptance(label: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append((label, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_LINES:
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {label}" + (f" :: {detail}" if detail else ""))


def nx_to_graph(g) -> OrderedGraph:
    g = nx.convert_node_labels_to_integers(g)
    return OrderedGraph(g.number_of_nodes(), sorted(tuple(sorted(e)) for e in g.edges()))


@pytest.fixture(scope="session")
def connected_small_graphs():
    """Every connected graph on 1..7 vertices, one per isomorphism class."""
    from networkx.generators.atlas import graph_atlas_g

    return [nx_to_graph(g) for g in graph_atlas_g()
            if g.number_of_nodes() >= 1 and nx.is_connected(g)]


@pytest.fixture(scope="session")
def all_small_graphs():
    """Every graph on 1..6 vertices up to isomorphism."""
    from networkx.generators.atlas import graph_atlas_g

    return [nx_to_graph(g) for g in graph_atlas_g() if 1 <= g.number_of_nodes() <= 6]
