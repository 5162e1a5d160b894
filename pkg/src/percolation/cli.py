"""``perc`` command line.

Exit codes: 0 success, 1 usage error, 2 I/O or input-format error,
3 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import _backend
from .bench import format_rows, scaling
from .engine import estimate_percolation, exact_percolation
from .graph import (
    GraphFormatError,
    RunConfig,
    assign_random_states,
    format_edge_list,
    generate_barabasi_albert,
    load_edge_list,
    load_states,
)
from .sssp import approximate_vertex_diameter

EXIT_USAGE, EXIT_IO, EXIT_COMPUTE = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _unit_interval(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="perc", description="Percolation centrality by shortest-path sampling.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_flags(p):
        p.add_argument("--graph", required=True, metavar="PATH", help="edge-list file")
        p.add_argument("--directed", action="store_true")
        p.add_argument("--weighted", action="store_true", help="read the third column as weights")

    def state_flags(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--states", metavar="PATH", help="percolation states file")
        g.add_argument("--random-states", type=int, metavar="SEED", help="uniform random states")

    def output_flags(p, default="csv"):
        p.add_argument("--output", metavar="PATH", help="default: standard output")
        p.add_argument("--format", choices=["csv", "json"], default=default)

    def sampling_flags(p):
        p.add_argument("--epsilon", type=_unit_interval, required=True)
        p.add_argument("--delta", type=_unit_interval, default=0.1)
        p.add_argument("--c", type=_positive_float, default=0.5)
        p.add_argument("--seed", type=int, default=0)

    threads = dict(type=_positive_int, default=1, help="worker threads")

    p = sub.add_parser("estimate", help="sampling estimate with (epsilon, delta) guarantee")
    graph_flags(p), state_flags(p), sampling_flags(p), output_flags(p)
    p.add_argument("--threads", **threads)

    p = sub.add_parser("exact", help="exact percolation centrality")
    graph_flags(p), state_flags(p), output_flags(p)
    p.add_argument("--threads", **threads)

    p = sub.add_parser("compare", help="estimate vs. exact error and speedup report")
    graph_flags(p), state_flags(p), sampling_flags(p), output_flags(p, default="json")
    p.add_argument("--threads", **threads)
    p.add_argument("--trials", type=_positive_int, default=5)

    p = sub.add_parser("generate", help="write a synthetic edge list")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", metavar="PATH")

    p = sub.add_parser("diameter", help="vertex-diameter upper bound")
    graph_flags(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bench", help="scalability and backend timing table (CSV)")
    p.add_argument("--sizes", default="250,500,1000,2000,4000")
    p.add_argument("--epsilon", type=_unit_interval, default=0.05)
    p.add_argument("--delta", type=_unit_interval, default=0.1)
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--backend", choices=["compiled", "python", "both"], default="both")
    p.add_argument("--output", metavar="PATH")
    return ap


def _read_graph(args):
    with open(args.graph, encoding="utf-8") as fh:
        return load_edge_list(fh, directed=args.directed, weighted=args.weighted)


def _read_states(args, g):
    if args.random_states is not None:
        return assign_random_states(g.n, args.random_states)
    with open(args.states, encoding="utf-8") as fh:
        return load_states(fh, g.n, labels=g.labels)


def _emit(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_values(g, result, meta, fmt):
    labels = g.label_array().tolist()
    values = result.values.tolist()
    if fmt == "json":
        doc = dict(meta, n=g.n, vertices=labels, values=values)
        return json.dumps(doc, indent=1) + "\n"
    lines = [f"# {k}={v}" for k, v in meta.items()]
    lines.append("vertex,percolation")
    lines += [f"{lab},{_fmt(v)}" for lab, v in zip(labels, values)]
    return "\n".join(lines) + "\n"


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def cmd_estimate(args):
    g = _read_graph(args)
    states = _read_states(args, g)
    cfg = RunConfig(args.epsilon, args.delta, args.c, args.seed, args.threads)
    est, seconds = _timed(lambda: estimate_percolation(g, states, cfg))
    meta = dict(kind="estimated", epsilon=args.epsilon, delta=args.delta, c=args.c,
                r=est.r, vd_bound=est.vd_bound, seed=args.seed, threads=args.threads)
    _emit(args, _render_values(g, est, meta, args.format))
    print(f"estimate: n={g.n} m={g.m} r={est.r} vd_bound={est.vd_bound} "
          f"wall={seconds:.6f}s backend={_backend.name()}", file=sys.stderr)


def cmd_exact(args):
    g = _read_graph(args)
    states = _read_states(args, g)
    res, seconds = _timed(lambda: exact_percolation(g, states, workers=args.threads))
    _emit(args, _render_values(g, res, dict(kind="exact", threads=args.threads), args.format))
    print(f"exact: n={g.n} m={g.m} wall={seconds:.6f}s backend={_backend.name()}", file=sys.stderr)


def compare_report(g, states, cfg, trials):
    exact, exact_seconds = _timed(lambda: exact_percolation(g, states, workers=cfg.workers))
    per_trial = []
    for t in range(trials):
        tcfg = RunConfig(cfg.epsilon, cfg.delta, cfg.c, cfg.seed + t, cfg.workers)
        est, seconds = _timed(lambda: estimate_percolation(g, states, tcfg))
        err = np.abs(est.values - exact.values)
        per_trial.append(dict(
            seed=tcfg.seed, r=est.r, vd_bound=est.vd_bound, estimate_seconds=seconds,
            avg_error=float(err.mean()), max_error=float(err.max()), std_error=float(err.std()),
            within_epsilon=bool(err.max() <= cfg.epsilon), errors=err.tolist(),
        ))
    all_err = np.array([e for tr in per_trial for e in tr["errors"]])
    estimate_seconds = float(np.mean([tr["estimate_seconds"] for tr in per_trial]))
    return dict(
        epsilon=cfg.epsilon, delta=cfg.delta, c=cfg.c, seed=cfg.seed, threads=cfg.workers,
        n=g.n, m=g.m, r=per_trial[0]["r"], vd_bound=per_trial[0]["vd_bound"],
        avg_error=float(all_err.mean()), max_error=float(all_err.max()),
        std_error=float(all_err.std()),
        exact_seconds=exact_seconds, estimate_seconds=estimate_seconds,
        speedup=exact_seconds / estimate_seconds,
        vertices=g.label_array().tolist(), trials=per_trial,
    )


def cmd_compare(args):
    g = _read_graph(args)
    states = _read_states(args, g)
    cfg = RunConfig(args.epsilon, args.delta, args.c, args.seed, args.threads)
    report = compare_report(g, states, cfg, args.trials)
    if args.format == "json":
        text = json.dumps(report, indent=1) + "\n"
    else:
        skip = ("trials", "vertices")
        lines = [f"# {k}={v}" for k, v in report.items() if k not in skip]
        lines.append("trial,vertex,abs_error")
        for t, tr in enumerate(report["trials"]):
            lines += [f"{t},{lab},{_fmt(e)}" for lab, e in zip(report["vertices"], tr["errors"])]
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    print(f"compare: avg_error={report['avg_error']:.3e} max_error={report['max_error']:.3e} "
          f"speedup={report['speedup']:.2f}", file=sys.stderr)


def cmd_generate(args):
    if args.model != "ba":
        raise UsageError(f"unsupported model {args.model!r} (only 'ba')")
    try:
        g = generate_barabasi_albert(args.n, args.m, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, format_edge_list(g, weighted=False))


def cmd_diameter(args):
    g = _read_graph(args)
    print(approximate_vertex_diameter(g, seed=args.seed))


def cmd_bench(args):
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    backends = _backend.available() if args.backend == "both" else [args.backend]
    rows = []
    for b in backends:
        rows += scaling(sizes, epsilon=args.epsilon, delta=args.delta, repeats=args.repeats, backend=b)
    _emit(args, format_rows(rows))


COMMANDS = {
    "estimate": cmd_estimate,
    "exact": cmd_exact,
    "compare": cmd_compare,
    "generate": cmd_generate,
    "diameter": cmd_diameter,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"perc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphFormatError) as exc:
        print(f"perc: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, RuntimeError) as exc:
        print(f"perc: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
