"""Shortest-path DAGs with path counts, uniform path sampling, vertex-diameter bound."""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph


class UnreachableError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ShortestPathDAG:
    """Single-source shortest paths.

    ``sigma[w]`` counts shortest source->w paths (as float64, exact below
    2**53) and ``preds[w]`` lists the predecessors of ``w`` on them in
    adjacency order. ``order`` holds the finalised vertices by non-decreasing
    distance. When the DAG was built towards a target, vertices that were not
    finalised before the search stopped look unreachable.
    """

    source: int
    dist: np.ndarray
    sigma: np.ndarray
    preds: list[list[int]]
    order: list[int]

    @property
    def n(self) -> int:
        return len(self.dist)

    def reachable(self, w: int) -> bool:
        return self.sigma[w] > 0


def shortest_path_dag(g: Graph, source: int, target: int | None = None) -> ShortestPathDAG:
    """BFS on unit-weight graphs, Dijkstra otherwise.

    With ``target``, the search stops once every predecessor of ``target``
    is final. Ties between real-valued distances are exact float equality.
    """
    n = g.n
    if not 0 <= source < n:
        raise IndexError(f"source {source} outside 0..{n - 1}")
    if target is not None and not 0 <= target < n:
        raise IndexError(f"target {target} outside 0..{n - 1}")
    indptr, indices, weights = g.indptr, g.indices, g.weights
    dist = [math.inf] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    dist[source] = 0.0
    sigma[source] = 1.0

    if g.unit_weights:
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if target is not None and dist[v] >= dist[target]:
                break
            order.append(v)
            nd = dist[v] + 1.0
            for y in indices[indptr[v] : indptr[v + 1]].tolist():
                if dist[y] == math.inf:
                    dist[y] = nd
                    queue.append(y)
                if dist[y] == nd:
                    sigma[y] += sigma[v]
                    preds[y].append(v)
        if target is not None and dist[target] < math.inf:
            order.append(target)
    else:
        heap = [(0.0, source)]
        done = [False] * n
        while heap:
            d, v = heapq.heappop(heap)
            if done[v] or d > dist[v]:
                continue
            done[v] = True
            order.append(v)
            if v == target:
                break
            lo, hi = indptr[v], indptr[v + 1]
            for y, w in zip(indices[lo:hi].tolist(), weights[lo:hi].tolist()):
                nd = d + w
                if nd < dist[y]:
                    dist[y] = nd
                    sigma[y] = sigma[v]
                    preds[y] = [v]
                    heapq.heappush(heap, (nd, y))
                elif nd == dist[y]:
                    sigma[y] += sigma[v]
                    preds[y].append(v)

    if target is not None:
        final = set(order)
        for v in range(n):
            if v not in final:
                dist[v], sigma[v], preds[v] = math.inf, 0.0, []
    # predecessor lists follow in-adjacency order regardless of discovery order
    for v in order:
        if len(preds[v]) > 1:
            rank = {z: i for i, z in enumerate(g.in_neighbors(v).tolist())}
            preds[v].sort(key=rank.__getitem__)
    return ShortestPathDAG(source, np.array(dist), np.array(sigma), preds, order)


def sample_shortest_path(dag: ShortestPathDAG, target: int, rng: np.random.Generator) -> list[int]:
    """Uniform random shortest source->target path, by walking predecessors backwards.

    Each step picks predecessor ``z`` of ``t`` with probability
    ``sigma[z] / sigma[t]``, which makes every path equally likely.
    """
    if dag.sigma[target] < 1:
        raise UnreachableError(f"vertex {target} is unreachable from {dag.source}")
    path = [target]
    t = target
    while t != dag.source:
        candidates = dag.preds[t]
        threshold = rng.random() * dag.sigma[t]
        cum = 0.0
        for z in candidates:
            cum += dag.sigma[z]
            if cum > threshold:
                break
        t = z
        path.append(t)
    path.reverse()
    return path


def connected_components(g: Graph) -> list[list[int]]:
    """Weakly connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for y in np.concatenate([g.neighbors(v), g.in_neighbors(v)]).tolist():
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def _hop_lengths(dag: ShortestPathDAG) -> dict[int, int]:
    # vertex count of the longest (in hops) shortest path to each finalised vertex
    hops = {dag.source: 1}
    for v in dag.order:
        if v != dag.source:
            hops[v] = 1 + max(hops[z] for z in dag.preds[v])
    return hops


def approximate_vertex_diameter(g: Graph, seed: int = 0, source: int | None = None) -> int:
    """Upper bound on the vertex diameter, at most twice the true value.

    Edge directions are ignored. In each connected component a seeded random
    vertex (or ``source``, for its own component) roots a shortest-path DAG;
    the component's bound is ``|p1| + |p2| - 1`` for the two longest shortest
    paths (counted in vertices) to distinct endpoints. The result is the
    maximum over components.
    """
    if g.n < 1:
        raise ValueError("graph has no vertices")
    sym = g.symmetrized()
    rng = np.random.default_rng(seed)
    best = 1
    for comp in connected_components(sym):
        if len(comp) == 1:
            continue
        s = comp[int(rng.integers(len(comp)))]
        if source is not None and source in comp:
            s = source
        lengths = sorted(_hop_lengths(shortest_path_dag(sym, s)).values(), reverse=True)
        best = max(best, lengths[0] + lengths[1] - 1)
    return best
