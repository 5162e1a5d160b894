import itertools

import numpy as np
import pytest

from percolation import Graph, PercolationStates, available_backends, use

DYADIC_WEIGHTS = (0.5, 1.0, 1.5, 2.0, 3.0)


def path_graph(n, directed=False):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], directed=directed)


def complete_graph(n):
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def diamond():
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def states(*xs):
    return PercolationStates(np.array(xs, dtype=float))


def random_graph(rng, n, directed, weighted, p=0.4, connected=False):
    """Erdős–Rényi-style graph; dyadic weights keep path sums exact so ties survive."""
    pairs = itertools.permutations(range(n), 2) if directed else itertools.combinations(range(n), 2)
    edges = []
    for u, v in pairs:
        if rng.random() < p:
            w = float(rng.choice(DYADIC_WEIGHTS)) if weighted else 1.0
            edges.append((u, v, w))
    if connected:
        # random spanning tree on top keeps every vertex reachable in the undirected sense
        order = rng.permutation(n).tolist()
        have = {(min(u, v), max(u, v)) for u, v, _ in edges}
        for i in range(1, n):
            a, b = order[i], order[int(rng.integers(i))]
            if (min(a, b), max(a, b)) not in have:
                have.add((min(a, b), max(a, b)))
                edges.append((a, b, 1.0))
    return Graph.from_edges(n, edges, directed=directed)


@pytest.fixture(params=available_backends())
def backend(request):
    with use(request.param):
        yield request.param


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
