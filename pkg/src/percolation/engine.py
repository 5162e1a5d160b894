"""Percolation centrality: exact computation, brute-force oracle and the sampling estimator."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import _backend
from .graph import Graph, PercolationStates, RunConfig
from .sssp import approximate_vertex_diameter


@dataclass(frozen=True, eq=False)
class DifferenceSums:
    """``total`` sums R(x_j - x_i) over all ordered pairs; ``exclusive[k]`` skips pairs touching k."""

    total: float
    exclusive: np.ndarray


@dataclass(frozen=True, eq=False)
class CentralityEstimates:
    values: np.ndarray
    kind: Literal["estimated", "exact"]
    r: int | None = None
    vd_bound: int | None = None
    seed: int | None = None
    workers: int = 1
    reached: int | None = None


def percolation_differences(sorted_states) -> DifferenceSums:
    """Linear-time difference sums over a non-decreasing array.

    With 1-based positions and prefix sums ``svp[k] = A[1] + ... + A[k-1]``::

        total      = sum_k ((k - 1) * A[k] - svp[k])
        exclusive[k] = total - (2k - n - 2) * A[k] - svp[n+1] + 2 * svp[k]
    """
    a = np.asarray(sorted_states, dtype=np.float64)
    n = len(a)
    if n == 0:
        return DifferenceSums(0.0, np.zeros(0))
    if np.any(a[1:] < a[:-1]):
        raise ValueError("input must be sorted in non-decreasing order")
    # differences are shift-invariant; anchoring at the minimum makes constant runs exact zeros
    a = a - a[0]
    svp = np.empty(n + 1)
    svp[0] = 0.0
    np.cumsum(a, out=svp[1:])
    k = np.arange(1, n + 1, dtype=np.float64)
    total = float(np.sum((k - 1.0) * a - svp[:n]))
    exclusive = total - a * (2.0 * k - n - 2.0) - svp[n] + 2.0 * svp[:n]
    # cancellation can leave ulp-sized excursions outside [0, total]
    np.clip(exclusive, 0.0, max(total, 0.0), out=exclusive)
    return DifferenceSums(max(total, 0.0), exclusive)


def exclusive_sums_by_vertex(states: PercolationStates) -> DifferenceSums:
    x = states.x
    order = np.argsort(x, kind="stable")
    sums = percolation_differences(x[order])
    exclusive = np.empty_like(sums.exclusive)
    exclusive[order] = sums.exclusive
    return DifferenceSums(sums.total, exclusive)


def sample_size(cfg: RunConfig, vd_bound: int) -> int:
    """Number of sampled paths for an (epsilon, delta) guarantee.

    ``ceil(c / eps^2 * (floor(log2(VD - 2)) + 1 + ln(1/delta)))``, with the
    pseudo-dimension term clamped to at least 1 for ``VD <= 3``.
    """
    if vd_bound < 1:
        raise ValueError("vd_bound must be >= 1")
    pd_term = (vd_bound - 2).bit_length() if vd_bound > 2 else 1
    pd_term = max(pd_term, 1)
    r = math.ceil(cfg.c / cfg.epsilon**2 * (pd_term + math.log(1.0 / cfg.delta)))
    return max(r, 1)


def _split(total: int, parts: int) -> list[int]:
    base, extra = divmod(total, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def _graph_arrays(g: Graph):
    return (g.indptr, g.indices, g.weights, g.rindptr, g.rindices, g.rweights, g.unit_weights)


def _run_parallel(fn, jobs, workers):
    if workers == 1 or len(jobs) == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def estimate_percolation(g: Graph, states: PercolationStates, cfg: RunConfig) -> CentralityEstimates:
    """Estimate every vertex's percolation centrality within ``cfg.epsilon``.

    Each of ``r`` iterations draws an ordered pair (u, w) uniformly, samples
    one shortest u->w path uniformly and credits every internal vertex z
    with ``R(x_u - x_w) / exclusive[z] / r``. Pairs with no path, or with
    ``x_u <= x_w``, credit nothing. Iterations are split across
    ``cfg.workers`` threads with independent streams spawned from
    ``cfg.seed``; output is deterministic for a fixed (seed, workers).
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if len(states) != n:
        raise ValueError(f"{len(states)} states for {n} vertices")
    vd = approximate_vertex_diameter(g, seed=cfg.seed)
    r = sample_size(cfg, vd)
    exclusive = exclusive_sums_by_vertex(states).exclusive
    kernels = _backend.kernels()
    arrays = _graph_arrays(g)
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.workers)

    def work(iterations, stream):
        out = np.zeros(n)
        _, reached = kernels.sample_paths(
            *arrays, states.x, exclusive, iterations, np.random.default_rng(stream), out
        )
        return out, reached

    jobs = list(zip(_split(r, cfg.workers), streams))
    results = _run_parallel(work, jobs, cfg.workers)
    acc = np.zeros(n)
    for out, _ in results:
        acc += out
    values = np.clip(acc / r, 0.0, 1.0)
    return CentralityEstimates(
        values, "estimated", r=r, vd_bound=vd, seed=cfg.seed, workers=cfg.workers,
        reached=sum(reached for _, reached in results),
    )


def exact_percolation(g: Graph, states: PercolationStates, workers: int = 1) -> CentralityEstimates:
    """Exact percolation centrality via one dependency accumulation per source.

    For source u, each target w is seeded with ``R(x_u - x_w)`` and the
    dependencies flow back through the shortest-path DAG, giving
    ``sum_w sigma_uw(v) / sigma_uw * R(x_u - x_w)`` for every v. Sources are
    split into contiguous blocks across ``workers`` threads.
    """
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if len(states) != n:
        raise ValueError(f"{len(states)} states for {n} vertices")
    exclusive = exclusive_sums_by_vertex(states).exclusive
    kernels = _backend.kernels()
    arrays = _graph_arrays(g)
    workers = max(1, min(workers, n))
    bounds = np.cumsum([0] + _split(n, workers))

    def work(lo, hi):
        out = np.zeros(n)
        kernels.accumulate_exact(*arrays, states.x, np.arange(lo, hi, dtype=np.int64), out)
        return out

    acc = np.zeros(n)
    for out in _run_parallel(work, list(zip(bounds[:-1], bounds[1:])), workers):
        acc += out
    values = np.zeros(n)
    pos = exclusive > 0
    values[pos] = acc[pos] / (n * (n - 1) * exclusive[pos])
    return CentralityEstimates(np.clip(values, 0.0, 1.0), "exact", workers=workers)


def _all_shortest_paths(g: Graph, u: int, w: int) -> list[list[int]]:
    # branch and bound over simple paths; weights summed left to right like the searches
    best = [math.inf]
    found: list[list[int]] = []
    path = [u]
    on_path = [False] * g.n
    on_path[u] = True

    def dfs(v, weight):
        if weight > best[0]:
            return
        if v == w:
            if weight < best[0]:
                best[0] = weight
                found.clear()
            found.append(list(path))
            return
        lo, hi = g.indptr[v], g.indptr[v + 1]
        for y, wt in zip(g.indices[lo:hi].tolist(), g.weights[lo:hi].tolist()):
            if not on_path[y]:
                on_path[y] = True
                path.append(y)
                dfs(y, weight + wt)
                path.pop()
                on_path[y] = False

    dfs(u, 0.0)
    return found


def brute_force_percolation(g: Graph, states: PercolationStates, max_n: int = 10) -> CentralityEstimates:
    """Term-by-term evaluation of the definition by enumerating every shortest path.

    Shares no code with :func:`exact_percolation`; exponential, so refuses
    graphs with more than ``max_n`` vertices.
    """
    n = g.n
    if n > max_n:
        raise ValueError(f"brute force refuses n={n} > {max_n}")
    if n < 2:
        raise ValueError("need at least two vertices")
    x = states.x.tolist()

    def ramp(d):
        return d if d > 0 else 0.0

    through = [0.0] * n
    for u in range(n):
        for w in range(n):
            if u == w:
                continue
            paths = _all_shortest_paths(g, u, w)
            if not paths:
                continue
            for p in paths:
                for v in p[1:-1]:
                    through[v] += ramp(x[u] - x[w]) / len(paths)
    values = np.zeros(n)
    for v in range(n):
        denom = sum(ramp(x[f] - x[d]) for f in range(n) for d in range(n) if v not in (f, d))
        if denom > 0:
            values[v] = through[v] / denom / (n * (n - 1))
    return CentralityEstimates(values, "exact")
