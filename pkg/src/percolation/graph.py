"""Graph storage, edge-list I/O, Barabási–Albert generation and percolation states.

Graphs are immutable and keep their adjacency in CSR form (``indptr`` /
``indices`` / ``weights``) for both out- and in-edges, so the kernels can walk
neighbours without touching Python objects.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np


class GraphFormatError(ValueError):
    """Malformed edge-list or states input. ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _csr(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray):
    # stable sort keeps the input edge order inside each row
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, dst[order].astype(np.int64), w[order].astype(np.float64)


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed or undirected graph on vertices ``0..n-1`` with positive weights.

    Undirected edges are stored once in ``src``/``dst`` and appear in both
    directions in the adjacency arrays.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    directed: bool = False
    labels: np.ndarray | None = None
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    rindptr: np.ndarray = field(init=False, repr=False)
    rindices: np.ndarray = field(init=False, repr=False)
    rweights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        src = np.ascontiguousarray(self.src, dtype=np.int64)
        dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        w = np.ascontiguousarray(self.weight, dtype=np.float64)
        if not (src.shape == dst.shape == w.shape):
            raise ValueError("src, dst and weight must have the same length")
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(src) and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= self.n):
            raise ValueError("edge endpoint out of range")
        if np.any(src == dst):
            raise ValueError("self-loops are not allowed")
        if np.any(~(w > 0)) or not np.all(np.isfinite(w)):
            raise ValueError("edge weights must be finite and strictly positive")
        keys = np.stack([src, dst], axis=1) if self.directed else np.sort(np.stack([src, dst], axis=1), axis=1)
        if len(keys) and len(np.unique(keys, axis=0)) != len(keys):
            raise ValueError("duplicate edges are not allowed")

        if self.directed:
            out = _csr(self.n, src, dst, w)
            rev = _csr(self.n, dst, src, w)
        else:
            both_src = np.concatenate([src, dst])
            both_dst = np.concatenate([dst, src])
            both_w = np.concatenate([w, w])
            out = rev = _csr(self.n, both_src, both_dst, both_w)
        if self.labels is not None:
            labels = np.ascontiguousarray(self.labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise ValueError("need exactly one label per vertex")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)
        for name, arr in zip(("src", "dst", "weight"), (src, dst, w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name, arr in zip(
            ("indptr", "indices", "weights", "rindptr", "rindices", "rweights"), out + rev
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], directed: bool = False, labels=None) -> "Graph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples."""
        edges = list(edges)
        src = np.array([e[0] for e in edges], dtype=np.int64)
        dst = np.array([e[1] for e in edges], dtype=np.int64)
        w = np.array([e[2] if len(e) > 2 else 1.0 for e in edges], dtype=np.float64)
        return cls(n, src, dst, w, directed, labels)

    def label(self, v: int) -> int:
        """Original id of dense vertex ``v`` (itself when the graph has no labels)."""
        return int(self.labels[v]) if self.labels is not None else v

    def label_array(self) -> np.ndarray:
        return self.labels if self.labels is not None else np.arange(self.n)

    @property
    def m(self) -> int:
        return len(self.src)

    @property
    def unit_weights(self) -> bool:
        """True when every weight is 1, so BFS replaces Dijkstra."""
        return bool(np.all(self.weight == 1.0))

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(u), int(v), float(w)) for u, v, w in zip(self.src, self.dst, self.weight)]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.rindices[self.rindptr[v] : self.rindptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def symmetrized(self) -> "Graph":
        """Undirected copy ignoring edge directions (antiparallel pairs merged, minimum weight kept)."""
        if not self.directed:
            return self
        best: dict[tuple[int, int], float] = {}
        for u, v, w in self.edges:
            key = (u, v) if u < v else (v, u)
            if key not in best or w < best[key]:
                best[key] = w
        return Graph.from_edges(self.n, [(u, v, w) for (u, v), w in best.items()], directed=False)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
            and np.array_equal(self.label_array(), other.label_array())
        )

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self.m}, {kind}, unit_weights={self.unit_weights})"


def _lines(text: str | TextIO) -> Iterable[str]:
    return io.StringIO(text) if isinstance(text, str) else text


def load_edge_list(text: str | TextIO, directed: bool = False, weighted: bool = False) -> Graph:
    """Parse a SNAP-style edge list (``u v`` or ``u v w`` per line, ``#`` comments).

    Vertex ids are remapped to ``0..n-1`` in order of first appearance; the
    original ids are kept in ``Graph.labels``.
    Duplicate edges collapse to the minimum weight; self-loop lines are
    dropped with a warning. When ``weighted`` is false a third column is
    validated but ignored.
    """
    ids: dict[int, int] = {}
    best: dict[tuple[int, int], float] = {}
    order: list[tuple[int, int]] = []
    loops = 0

    for lineno, raw in enumerate(_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise GraphFormatError(f"expected 2 or 3 tokens, got {len(tokens)}", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise GraphFormatError("vertex ids must be non-negative", lineno)
        w = 1.0
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise GraphFormatError(f"non-numeric weight {tokens[2]!r}", lineno) from None
            if not (w > 0) or not math.isfinite(w):
                raise GraphFormatError(f"weight must be positive, got {tokens[2]}", lineno)
            if not weighted:
                w = 1.0
        if a == b:
            loops += 1
            continue
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        key = (u, v) if directed or u < v else (v, u)
        if key in best:
            best[key] = min(best[key], w)
        else:
            best[key] = w
            order.append((u, v))

    if loops:
        warnings.warn(f"dropped {loops} self-loop line(s)", stacklevel=2)

    def stored(u, v):
        return best[(u, v) if directed or u < v else (v, u)]

    return Graph.from_edges(
        len(ids), [(u, v, stored(u, v)) for u, v in order], directed=directed, labels=list(ids)
    )


def format_edge_list(g: Graph, weighted: bool | None = None) -> str:
    """Serialise ``g`` (using original labels) in the format read by :func:`load_edge_list`."""
    if weighted is None:
        weighted = not g.unit_weights
    lab = g.label_array().tolist()
    out = [f"# n={g.n} m={g.m} {'directed' if g.directed else 'undirected'}\n"]
    for u, v, w in g.edges:
        out.append(f"{lab[u]} {lab[v]} {w!r}\n" if weighted else f"{lab[u]} {lab[v]}\n")
    return "".join(out)


def generate_barabasi_albert(n: int, m_attach: int, seed: int) -> Graph:
    """Undirected preferential-attachment graph with ``m_attach*(n-m_attach)`` edges.

    Starts from ``m_attach`` isolated vertices. Each new vertex picks
    ``m_attach`` distinct targets by uniform draws from the list of repeated
    edge endpoints (so probability is proportional to degree); the first new
    vertex, facing all-zero degrees, links to every seed vertex.
    """
    if m_attach < 1 or n <= m_attach:
        raise ValueError(f"need n > m_attach >= 1, got n={n}, m_attach={m_attach}")
    rng = np.random.default_rng(seed)
    repeated: list[int] = []
    edges: list[tuple[int, int]] = []
    for v in range(m_attach, n):
        if not repeated:
            targets = [int(t) for t in rng.permutation(v)[:m_attach]]
        else:
            chosen: set[int] = set()
            targets = []
            while len(targets) < m_attach:
                t = repeated[int(rng.integers(len(repeated)))]
                if t not in chosen:
                    chosen.add(t)
                    targets.append(t)
        for t in targets:
            edges.append((v, t))
        repeated.extend(targets)
        repeated.extend([v] * m_attach)
    return Graph.from_edges(n, edges, directed=False)


def _check_states(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("states must be a 1-d array")
    if np.any(np.isnan(x)) or np.any(x < 0) or np.any(x > 1):
        raise ValueError("percolation states must lie in [0, 1]")
    x.setflags(write=False)
    return x


@dataclass(frozen=True, eq=False)
class PercolationStates:
    """Per-vertex percolation level; 0 is clean, 1 is fully percolated."""

    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _check_states(self.x))

    def __len__(self):
        return len(self.x)

    def __eq__(self, other):
        if not isinstance(other, PercolationStates):
            return NotImplemented
        return np.array_equal(self.x, other.x)

    def scaled(self, alpha: float) -> "PercolationStates":
        return PercolationStates(self.x * alpha)


def assign_random_states(n: int, seed: int) -> PercolationStates:
    """Independent uniform [0, 1) state per vertex; deterministic in ``seed``."""
    return PercolationStates(np.random.default_rng(seed).random(n))


def load_states(text: str | TextIO, n: int, labels=None) -> PercolationStates:
    """Read ``v x`` pairs, or one value per line in vertex order.

    ``labels`` (original ids, e.g. ``Graph.labels``) lets pair lines name
    vertices by original id instead of dense index.
    """
    x = np.full(n, np.nan)
    index = {int(lab): i for i, lab in enumerate(labels)} if labels is not None else None
    form = None
    count = 0
    for lineno, raw in enumerate(_lines(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        this_form = {1: "positional", 2: "pairs"}.get(len(tokens))
        if this_form is None:
            raise GraphFormatError(f"expected 1 or 2 tokens, got {len(tokens)}", lineno)
        if form is None:
            form = this_form
        elif form != this_form:
            raise GraphFormatError("mixed positional and 'vertex value' lines", lineno)
        try:
            if form == "pairs":
                v, val = int(tokens[0]), float(tokens[1])
                if index is not None:
                    if v not in index:
                        raise GraphFormatError(f"unknown vertex {v}", lineno)
                    v = index[v]
            else:
                v, val = count, float(tokens[0])
        except ValueError:
            raise GraphFormatError(f"cannot parse {line!r}", lineno) from None
        if not 0 <= v < n:
            raise GraphFormatError(f"vertex {v} outside 0..{n - 1}", lineno)
        if not 0.0 <= val <= 1.0:
            raise GraphFormatError(f"state {val} outside [0, 1]", lineno)
        if not np.isnan(x[v]):
            raise GraphFormatError(f"duplicate assignment for vertex {v}", lineno)
        x[v] = val
        count += 1
    missing = np.flatnonzero(np.isnan(x))
    if len(missing):
        raise GraphFormatError(f"no state for vertex {int(missing[0])} ({len(missing)} missing)")
    return PercolationStates(x)


@dataclass(frozen=True)
class RunConfig:
    epsilon: float
    delta: float = 0.1
    c: float = 0.5
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError(f"epsilon must be in (0, 1], got {self.epsilon}")
        if not 0 < self.delta <= 1:
            raise ValueError(f"delta must be in (0, 1], got {self.delta}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
