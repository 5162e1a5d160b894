"""Pure-Python kernels. Reference behaviour for the compiled ``_kernels`` module.

Both implementations consume uniforms in blocks of ``BLOCK`` from a numpy
``Generator`` and follow the same visiting order, so they return bit-identical
accumulators for the same inputs.
"""

import heapq
import math

BLOCK = 4096
INF = math.inf


class _Uniforms:
    def __init__(self, rng, size=BLOCK):
        self.rng = rng
        self.size = size
        self.buf = []
        self.pos = size

    def next(self):
        if self.pos == self.size:
            self.buf = self.rng.random(self.size).tolist()
            self.pos = 0
        self.pos += 1
        return self.buf[self.pos - 1]


class _Workspace:
    def __init__(self, n):
        self.dist = [INF] * n
        self.sigma = [0.0] * n
        self.order = []

    def reset(self):
        for v in self.order:
            self.dist[v] = INF
            self.sigma[v] = 0.0
        self.order = []


def _search(ws, indptr, indices, weights, unit, s, target):
    """Fill dist/sigma from ``s``; stop early once ``target`` (>= 0) is final.

    ``ws.order`` receives every touched vertex; for full searches
    (``target < 0``) it is the non-decreasing distance order.
    """
    dist, sigma, order = ws.dist, ws.sigma, ws.order
    dist[s] = 0.0
    sigma[s] = 1.0
    if unit:
        order.append(s)
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv = dist[v]
            if target >= 0 and dv >= dist[target]:
                break
            sv = sigma[v]
            nd = dv + 1.0
            for k in range(indptr[v], indptr[v + 1]):
                y = indices[k]
                if dist[y] == INF:
                    dist[y] = nd
                    order.append(y)
                if dist[y] == nd:
                    sigma[y] += sv
        return order
    settled = []
    heap = [(0.0, s)]
    touched = order
    touched.append(s)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done or d > dist[v]:
            continue
        done.add(v)
        settled.append(v)
        if v == target:
            break
        sv = sigma[v]
        for k in range(indptr[v], indptr[v + 1]):
            y = indices[k]
            nd = d + weights[k]
            dy = dist[y]
            if nd < dy:
                if dy == INF:
                    touched.append(y)
                dist[y] = nd
                sigma[y] = sv
                heapq.heappush(heap, (nd, y))
            elif nd == dy:
                sigma[y] += sv
    return settled


def sample_paths(indptr, indices, weights, rindptr, rindices, rweights, unit,
                 states, exclusive, iterations, rng, out):
    """Run ``iterations`` pair/path samples, adding raw contributions into ``out``.

    Returns ``(searched, reached)``: pairs with a positive state difference
    that needed a search, and how many of those had a path.
    """
    n = len(indptr) - 1
    indptr, indices, weights = indptr.tolist(), indices.tolist(), weights.tolist()
    rindptr, rindices, rweights = rindptr.tolist(), rindices.tolist(), rweights.tolist()
    x = states.tolist()
    excl = exclusive.tolist()
    acc = out.tolist()
    uni = _Uniforms(rng)
    ws = _Workspace(n)
    dist, sigma = ws.dist, ws.sigma
    searched = reached = 0
    for _ in range(iterations):
        u = min(int(uni.next() * n), n - 1)
        w = min(int(uni.next() * (n - 1)), n - 2)
        if w >= u:
            w += 1
        num = x[u] - x[w]
        if num <= 0.0:
            continue
        searched += 1
        _search(ws, indptr, indices, weights, unit, u, w)
        if dist[w] == INF:
            ws.reset()
            continue
        reached += 1
        t = w
        while True:
            threshold = uni.next() * sigma[t]
            cum = 0.0
            z = -1
            dt = dist[t]
            for k in range(rindptr[t], rindptr[t + 1]):
                y = rindices[k]
                if dist[y] + rweights[k] == dt:
                    cum += sigma[y]
                    z = y
                    if cum > threshold:
                        break
            if z == u:
                break
            if excl[z] > 0.0:
                acc[z] += num / excl[z]
            t = z
        ws.reset()
    out[:] = acc
    return searched, reached


def accumulate_exact(indptr, indices, weights, rindptr, rindices, rweights, unit,
                     states, sources, out):
    """Brandes-style accumulation of ``sum_w sigma_sw(v)/sigma_sw * R(x_s - x_w)`` into ``out``."""
    n = len(indptr) - 1
    indptr, indices, weights = indptr.tolist(), indices.tolist(), weights.tolist()
    rindptr, rindices, rweights = rindptr.tolist(), rindices.tolist(), rweights.tolist()
    x = states.tolist()
    acc = out.tolist()
    ws = _Workspace(n)
    dist, sigma = ws.dist, ws.sigma
    delta = [0.0] * n
    for s in sources.tolist():
        order = _search(ws, indptr, indices, weights, unit, s, -1)
        xs = x[s]
        for t in reversed(order):
            r = xs - x[t]
            coeff = ((r if r > 0.0 else 0.0) + delta[t]) / sigma[t]
            dt = dist[t]
            for k in range(rindptr[t], rindptr[t + 1]):
                y = rindices[k]
                if dist[y] + rweights[k] == dt:
                    delta[y] += sigma[y] * coeff
            if t != s:
                acc[t] += delta[t]
        for t in order:
            delta[t] = 0.0
        ws.reset()
    out[:] = acc
