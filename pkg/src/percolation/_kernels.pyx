# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same contract and results as ``_pykernels``.

The sampling loop runs without the GIL and only re-acquires it to refill the
uniform buffer, so several workers can sample concurrently from threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

ctypedef cnp.int64_t i64

BLOCK = 4096


cdef class _Uniforms:
    cdef object rng
    cdef double[::1] buf
    cdef Py_ssize_t pos, size

    def __init__(self, rng, Py_ssize_t size):
        self.rng = rng
        self.size = size
        self.pos = size
        self.buf = np.empty(size)

    cdef double next(self) noexcept nogil:
        if self.pos == self.size:
            with gil:
                self.buf = self.rng.random(self.size)
            self.pos = 0
        self.pos += 1
        return self.buf[self.pos - 1]


cdef class _Workspace:
    cdef double[::1] dist, sigma, delta, hkey
    cdef i64[::1] order, touched, hval
    cdef unsigned char[::1] done
    cdef i64 ntouched, norder, hsize

    def __init__(self, i64 n, i64 nnz):
        self.dist = np.full(n, np.inf)
        self.sigma = np.zeros(n)
        self.delta = np.zeros(n)
        self.order = np.empty(n, dtype=np.int64)
        self.touched = np.empty(n, dtype=np.int64)
        self.done = np.zeros(n, dtype=np.uint8)
        self.hkey = np.empty(nnz + 1)
        self.hval = np.empty(nnz + 1, dtype=np.int64)
        self.ntouched = 0
        self.norder = 0
        self.hsize = 0

    cdef void reset(self) noexcept nogil:
        cdef i64 i, v
        for i in range(self.ntouched):
            v = self.touched[i]
            self.dist[v] = INFINITY
            self.sigma[v] = 0.0
            self.done[v] = 0
        self.ntouched = 0
        self.norder = 0
        self.hsize = 0

    cdef inline void touch(self, i64 v) noexcept nogil:
        self.touched[self.ntouched] = v
        self.ntouched += 1

    cdef inline void push(self, double k, i64 v) noexcept nogil:
        cdef i64 i = self.hsize, p
        self.hsize += 1
        while i > 0:
            p = (i - 1) >> 1
            if self.hkey[p] <= k:
                break
            self.hkey[i] = self.hkey[p]
            self.hval[i] = self.hval[p]
            i = p
        self.hkey[i] = k
        self.hval[i] = v

    cdef inline i64 pop(self, double* k) noexcept nogil:
        cdef i64 top = self.hval[0]
        cdef i64 n, i, c, lv
        cdef double lk
        k[0] = self.hkey[0]
        self.hsize -= 1
        n = self.hsize
        if n == 0:
            return top
        lk = self.hkey[n]
        lv = self.hval[n]
        i = 0
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and self.hkey[c + 1] < self.hkey[c]:
                c += 1
            if self.hkey[c] >= lk:
                break
            self.hkey[i] = self.hkey[c]
            self.hval[i] = self.hval[c]
            i = c
        self.hkey[i] = lk
        self.hval[i] = lv
        return top

    cdef void search(self, const i64[::1] indptr, const i64[::1] indices,
                     const double[::1] weights, bint unit, i64 s, i64 target) noexcept nogil:
        # fills self.order with settled vertices in non-decreasing distance
        cdef i64 head, v, y, k
        cdef double dv, sv, nd, dy
        self.dist[s] = 0.0
        self.sigma[s] = 1.0
        self.touch(s)
        if unit:
            self.order[0] = s
            self.norder = 1
            head = 0
            while head < self.norder:
                v = self.order[head]
                head += 1
                dv = self.dist[v]
                if target >= 0 and dv >= self.dist[target]:
                    break
                sv = self.sigma[v]
                nd = dv + 1.0
                for k in range(indptr[v], indptr[v + 1]):
                    y = indices[k]
                    if self.dist[y] == INFINITY:
                        self.dist[y] = nd
                        self.order[self.norder] = y
                        self.norder += 1
                        self.touch(y)
                    if self.dist[y] == nd:
                        self.sigma[y] += sv
            return
        self.push(0.0, s)
        while self.hsize > 0:
            v = self.pop(&dv)
            if self.done[v] or dv > self.dist[v]:
                continue
            self.done[v] = 1
            self.order[self.norder] = v
            self.norder += 1
            if v == target:
                break
            sv = self.sigma[v]
            for k in range(indptr[v], indptr[v + 1]):
                y = indices[k]
                nd = dv + weights[k]
                dy = self.dist[y]
                if nd < dy:
                    if dy == INFINITY:
                        self.touch(y)
                    self.dist[y] = nd
                    self.sigma[y] = sv
                    self.push(nd, y)
                elif nd == dy:
                    self.sigma[y] += sv


def sample_paths(const i64[::1] indptr, const i64[::1] indices, const double[::1] weights,
                 const i64[::1] rindptr, const i64[::1] rindices, const double[::1] rweights,
                 bint unit, const double[::1] states, const double[::1] exclusive,
                 i64 iterations, rng, double[::1] out):
    cdef i64 n = indptr.shape[0] - 1
    cdef _Workspace ws = _Workspace(n, indices.shape[0])
    cdef _Uniforms uni = _Uniforms(rng, BLOCK)
    cdef i64 it, u, w, t, z, y, k
    cdef i64 searched = 0, reached = 0
    cdef double num, threshold, cum, dt
    with nogil:
        for it in range(iterations):
            u = <i64>(uni.next() * n)
            if u > n - 1:
                u = n - 1
            w = <i64>(uni.next() * (n - 1))
            if w > n - 2:
                w = n - 2
            if w >= u:
                w += 1
            num = states[u] - states[w]
            if num <= 0.0:
                continue
            searched += 1
            ws.search(indptr, indices, weights, unit, u, w)
            if ws.dist[w] == INFINITY:
                ws.reset()
                continue
            reached += 1
            t = w
            while True:
                threshold = uni.next() * ws.sigma[t]
                cum = 0.0
                z = -1
                dt = ws.dist[t]
                for k in range(rindptr[t], rindptr[t + 1]):
                    y = rindices[k]
                    if ws.dist[y] + rweights[k] == dt:
                        cum += ws.sigma[y]
                        z = y
                        if cum > threshold:
                            break
                if z == u:
                    break
                if exclusive[z] > 0.0:
                    out[z] += num / exclusive[z]
                t = z
            ws.reset()
    return searched, reached


def accumulate_exact(const i64[::1] indptr, const i64[::1] indices, const double[::1] weights,
                     const i64[::1] rindptr, const i64[::1] rindices, const double[::1] rweights,
                     bint unit, const double[::1] states, const i64[::1] sources, double[::1] out):
    cdef i64 n = indptr.shape[0] - 1
    cdef _Workspace ws = _Workspace(n, indices.shape[0])
    cdef i64 si, s, j, t, y, k
    cdef double xs, r, coeff, dt
    with nogil:
        for si in range(sources.shape[0]):
            s = sources[si]
            ws.search(indptr, indices, weights, unit, s, -1)
            xs = states[s]
            for j in range(ws.norder - 1, -1, -1):
                t = ws.order[j]
                r = xs - states[t]
                if r < 0.0:
                    r = 0.0
                coeff = (r + ws.delta[t]) / ws.sigma[t]
                dt = ws.dist[t]
                for k in range(rindptr[t], rindptr[t + 1]):
                    y = rindices[k]
                    if ws.dist[y] + rweights[k] == dt:
                        ws.delta[y] += ws.sigma[y] * coeff
                if t != s:
                    out[t] += ws.delta[t]
            for j in range(ws.norder):
                ws.delta[ws.order[j]] = 0.0
            ws.reset()
