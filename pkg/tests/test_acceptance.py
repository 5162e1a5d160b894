"""Acceptance gate: one test per exit criterion, each printing a PASS/FAIL line.

The lines are collected and repeated in pytest's terminal summary.
"""

import math
import time
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chisquare

from percolation import (
    PercolationStates,
    RunConfig,
    approximate_vertex_diameter,
    assign_random_states,
    brute_force_percolation,
    estimate_percolation,
    exact_percolation,
    generate_barabasi_albert,
    percolation_differences,
    sample_shortest_path,
    sample_size,
    shortest_path_dag,
)
from percolation.bench import loglog_slope, scaling
from percolation.cli import main as cli_main

from conftest import complete_graph, path_graph, random_graph, states
from oracles import shortest_paths, vertex_diameter_unweighted

RESULTS: list[str] = []


def report(number, ok, detail):
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_c1_difference_sums_vs_double_loop():
    rng = np.random.default_rng(1)
    worst = 0.0
    t0 = time.perf_counter()
    for i in range(1000):
        n = int(rng.integers(1, 201))
        kind = i % 4
        if kind == 0:
            a = rng.random(n)
        elif kind == 1:
            a = rng.choice([0.0, 0.1, 0.25, 0.5, 0.9, 1.0], n)
        elif kind == 2:
            a = np.full(n, rng.random())
        else:
            a = np.where(rng.random(n) < 0.8, rng.random(), rng.random(n))
        a = np.sort(a)
        # O(n^2): every ordered pair's ramp, then strip the row and column touching k
        diffs = np.maximum(a[None, :] - a[:, None], 0.0)
        total = diffs.sum()
        exclusive = total - diffs.sum(axis=0) - diffs.sum(axis=1)
        got = percolation_differences(a)
        if total == 0:
            assert got.total == 0 and not got.exclusive.any()
            continue
        err = max(abs(got.total - total), np.abs(got.exclusive - exclusive).max()) / total
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-9 and elapsed < 5,
           f"Algorithm 1 vs O(n^2) loop on 1000 arrays: max relative error {worst:.2e} "
           f"(tol 1e-9), {elapsed:.2f}s (< 5s)")


def test_c2_exact_matches_brute_force():
    rng = np.random.default_rng(2)
    worst = 0.0
    t0 = time.perf_counter()
    for directed in (False, True):
        for weighted in (False, True):
            for _ in range(50):
                n = int(rng.integers(2, 9))
                g = random_graph(rng, n, directed, weighted, p=float(rng.uniform(0.2, 0.7)))
                s = PercolationStates(rng.random(n))
                diff = np.abs(exact_percolation(g, s).values - brute_force_percolation(g, s).values)
                worst = max(worst, diff.max())
    elapsed = time.perf_counter() - t0
    report(2, worst <= 1e-9 and elapsed < 30,
           f"exact vs brute force on 4x50 graphs (n<=8): max abs diff {worst:.2e} (tol 1e-9), "
           f"{elapsed:.1f}s (< 30s)")


def test_c3_hand_values():
    checks = {
        "P3 [1,.5,0]": (exact_percolation(path_graph(3), states(1, 0.5, 0)).values, [0, 1 / 6, 0]),
        "K5": (exact_percolation(complete_graph(5), assign_random_states(5, 3)).values, [0] * 5),
        "directed anti-percolated P3": (
            exact_percolation(path_graph(3, directed=True), states(0, 0.5, 1)).values, [0, 0, 0]),
    }
    worst = max(np.abs(np.array(v) - np.array(e)).max() for v, e in checks.values())
    report(3, worst <= 1e-12, f"hand-computed values ({', '.join(checks)}): max abs diff {worst:.1e} (tol 1e-12)")


@pytest.mark.slow
def test_c4_epsilon_delta_guarantee():
    eps, delta, trials = 0.05, 0.1, 20
    within = total = 0
    errs = []
    t0 = time.perf_counter()
    for k in range(10):
        g = generate_barabasi_albert(300, 2, seed=400 + k)
        s = assign_random_states(300, seed=500 + k)
        exact = exact_percolation(g, s).values
        for t in range(trials):
            est = estimate_percolation(g, s, RunConfig(eps, delta, seed=1000 * k + t)).values
            err = np.abs(est - exact)
            within += err.max() <= eps
            total += 1
            errs.append(err.mean())
    elapsed = time.perf_counter() - t0
    frac = within / total
    mean_err = float(np.mean(errs))
    report(4, frac >= 0.9 and mean_err <= eps / 10 and elapsed < 300,
           f"BA(300,2) x10 graphs x20 trials: {within}/{total} trials with max error <= {eps} "
           f"({frac:.0%}, need >= 90%); mean per-vertex error {mean_err:.2e} (<= {eps / 10}); {elapsed:.1f}s")


@pytest.mark.slow
def test_c5_path_sampling_uniform():
    rng = np.random.default_rng(5)
    worst_p = 1.0
    tested = multi = 0
    t0 = time.perf_counter()
    for i in range(10):
        n = int(rng.integers(4, 8))
        g = random_graph(rng, n, directed=bool(i % 2), weighted=bool(i % 3 == 0), p=0.55)
        for src in range(n):
            dag = shortest_path_dag(g, src)
            for dst in range(n):
                if dst == src:
                    continue
                paths = shortest_paths(g, src, dst)
                if not paths:
                    assert dag.sigma[dst] == 0
                    continue
                sigma = len(paths)
                assert dag.sigma[dst] == sigma
                draws = 1000 * sigma
                counts = Counter(tuple(sample_shortest_path(dag, dst, rng)) for _ in range(draws))
                assert set(counts) <= {tuple(p) for p in paths}
                tested += 1
                if sigma > 1:
                    multi += 1
                    p = chisquare([counts.get(tuple(p), 0) for p in paths]).pvalue
                    worst_p = min(worst_p, p)
    elapsed = time.perf_counter() - t0
    report(5, worst_p > 0.001 and elapsed < 120,
           f"uniform path sampling on {tested} pairs ({multi} with sigma>1): min chi-square p "
           f"{worst_p:.4f} (> 0.001), {elapsed:.1f}s")


def test_c6_diameter_bound():
    rng = np.random.default_rng(6)
    ok = True
    ratios = []
    t0 = time.perf_counter()
    for i in range(50):
        n = int(rng.integers(2, 101))
        g = random_graph(rng, n, False, False, p=float(rng.uniform(0.0, 4.0 / n)), connected=True)
        vd = vertex_diameter_unweighted(g)
        approx = approximate_vertex_diameter(g, seed=i)
        ok &= vd <= approx <= 2 * vd
        ratios.append(approx / vd)
    elapsed = time.perf_counter() - t0
    report(6, ok and elapsed < 10,
           f"VD <= approx <= 2 VD on 50 connected graphs (n<=100): ratios in "
           f"[{min(ratios):.2f}, {max(ratios):.2f}], {elapsed:.1f}s")


@pytest.mark.slow
def test_c7_scalability_shape():
    t0 = time.perf_counter()
    rows = scaling(sizes=(250, 500, 1000, 2000, 4000), epsilon=0.05, delta=0.1, repeats=5)
    ratios = [row.ratio for row in rows]
    increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
    slope = loglog_slope([row.work for row in rows], [row.estimate_seconds for row in rows])
    elapsed = time.perf_counter() - t0
    table = ", ".join(f"n={row.n}: {row.ratio:.2f}" for row in rows)
    report(7, increasing and abs(slope - 1) <= 0.3 and elapsed < 900,
           f"exact/estimate ratio strictly increasing ({table}); log-log slope of estimate "
           f"time vs r*m*log n = {slope:.2f} (1 +/- 0.3); backend={rows[0].backend}; {elapsed:.1f}s")


def test_c8_sample_size():
    got = [
        sample_size(RunConfig(1.0, 1.0, c=0.5), 3),
        sample_size(RunConfig(0.04, 0.1, c=0.5), 11),
        sample_size(RunConfig(0.05, 0.1, c=0.5), 34),
    ]
    report(8, got == [1, 1970, 1661], f"sample sizes {got} == [1, 1970, 1661]")


def test_c9_cli_determinism(tmp_path):
    graph = tmp_path / "ba.txt"
    assert cli_main(["generate", "--model", "ba", "--n", "250", "--m", "2", "--seed", "9",
                     "--output", str(graph)]) == 0
    blobs = []
    for fmt in ("csv", "json"):
        for i in range(2):
            out = tmp_path / f"{fmt}{i}"
            assert cli_main(["estimate", "--graph", str(graph), "--random-states", "4",
                             "--epsilon", "0.05", "--delta", "0.1", "--seed", "123",
                             "--threads", "3", "--format", fmt, "--output", str(out)]) == 0
            blobs.append(out.read_bytes())
    same = blobs[0] == blobs[1] and blobs[2] == blobs[3]
    report(9, same, "two estimate runs with identical flags/seed/threads: byte-identical CSV and JSON")
