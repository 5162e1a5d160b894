"""Runtime benchmarks: exact vs. sampling scalability, and compiled vs. Python kernels.

Run ``python -m percolation.bench`` (or ``perc bench``) for a CSV table.
"""

from __future__ import annotations

import contextlib
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .engine import estimate_percolation, exact_percolation
from .graph import RunConfig, assign_random_states, generate_barabasi_albert


@dataclass
class ScalingRow:
    backend: str
    n: int
    m: int
    r: int
    vd_bound: int
    exact_seconds: float
    estimate_seconds: float

    @property
    def ratio(self) -> float:
        return self.exact_seconds / self.estimate_seconds

    @property
    def work(self) -> float:
        # r * m * log n, the estimator's cost model
        return self.r * self.m * math.log(self.n)


def _best_time(fn, repeats):
    best, result = math.inf, None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def scaling(sizes=(250, 500, 1000, 2000, 4000), epsilon=0.05, delta=0.1, m_attach=2,
            seed=1, repeats=3, backend=None, exact=True) -> list[ScalingRow]:
    """Time exact and sampled computation on BA graphs of increasing size (best of ``repeats``)."""
    ctx = _backend.use(backend) if backend else contextlib.nullcontext()
    rows = []
    with ctx:
        name = _backend.name()
        for i, n in enumerate(sizes):
            g = generate_barabasi_albert(n, m_attach, seed + i)
            states = assign_random_states(n, seed + 1000 + i)
            cfg = RunConfig(epsilon, delta, seed=seed)
            t_est, est = _best_time(lambda: estimate_percolation(g, states, cfg), repeats)
            t_exact = _best_time(lambda: exact_percolation(g, states), repeats)[0] if exact else math.nan
            rows.append(ScalingRow(name, n, g.m, est.r, est.vd_bound, t_exact, t_est))
    return rows


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def format_rows(rows: list[ScalingRow]) -> str:
    lines = ["backend,n,m,r,vd_bound,exact_seconds,estimate_seconds,ratio"]
    for row in rows:
        d = asdict(row)
        lines.append(
            f"{d['backend']},{d['n']},{d['m']},{d['r']},{d['vd_bound']},"
            f"{d['exact_seconds']:.6f},{d['estimate_seconds']:.6f},{row.ratio:.3f}"
        )
    return "\n".join(lines) + "\n"


def main(argv=None):
    import argparse

    ap = argparse.ArgumentParser(prog="percolation.bench", description=__doc__)
    ap.add_argument("--sizes", default="250,500,1000,2000,4000")
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--backend", choices=["compiled", "python", "both"], default="both")
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = _backend.available() if args.backend == "both" else [args.backend]
    rows = []
    for b in backends:
        rows += scaling(sizes, epsilon=args.epsilon, repeats=args.repeats, backend=b)
    print(format_rows(rows), end="")


if __name__ == "__main__":
    main()
