import random

import networkx as nx
import pytest

from racg.graph import DefiningGraph

ACCEPTANCE_LINES: list[str] = []


def report(number: int, passed: bool, detail: str = "") -> str:
    line = f"ACCEPTANCE {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def random_connected_graph(rng: random.Random, n: int, p: float = 0.4):
    names = [chr(ord("a") + i) for i in range(n)]
    while True:
        g = nx.gnp_random_graph(n, p, seed=rng.randrange(1 << 30))
        if nx.is_connected(g):
            edges = [(names[u], names[v]) for u, v in g.edges]
            return names, edges


def to_defining(names, edges) -> DefiningGraph:
    return DefiningGraph(names, edges)


def atlas_graphs(max_n: int, min_n: int = 1):
    """Connected graphs up to isomorphism, as (names, edges)."""
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < min_n or n > max_n or not nx.is_connected(g):
            continue
        names = [chr(ord("a") + i) for i in range(n)]
        out.append((names, [(names[u], names[v]) for u, v in g.edges]))
    return out


@pytest.fixture
def square():
    return DefiningGraph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


@pytest.fixture
def pentagon():
    names = ["a", "b", "c", "d", "e"]
    return DefiningGraph(names, [(names[i], names[(i + 1) % 5]) for i in range(5)])
