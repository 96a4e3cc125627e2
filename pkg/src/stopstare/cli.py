"""Command-line front end.

    stopstare convert IN OUT [--undirected] [--auto-weight] [--remap]
    stopstare im    --graph G --model {ic,lt} --algo {ssa,dssa} --k K [--eps E] [--delta D|auto]
    stopstare tvm   ... --weights W
    stopstare eval  --graph G --model M --seeds 0,4,7 [--runs R]
    stopstare exact [influence|opt] --graph G --model M (--seeds S | --k K)
    stopstare bench --graph G --model M --algos ssa,dssa --ks 1,50 [--runs R]
    stopstare bench --suite guarantees

Records are written as JSON (one object per line); ``--csv`` flattens them.
Exit status: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .bounds import EpsilonSplit
from .dssa import dssa
from .errors import StopStareError
from .graph import (
    BINARY_MAGIC,
    auto_weight,
    load_edge_list,
    load_raw_edge_list,
    read_binary,
    undirected,
    write_binary,
    write_edge_list,
)
from .oracle import exact_influence, exact_opt, mc_influence
from .ssa import ssa
from .tvm import load_weights, tvm_run

SCHEMA = "stopstare.run/1"
log = logging.getLogger("stopstare")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _unit_interval(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1), got {value}")
    return value


def _delta(text):
    return "auto" if text == "auto" else _unit_interval(text)


def _int_list(text):
    try:
        values = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("SSA_THREADS")
    return max(1, int(env)) if env else 1


def load_graph_file(path: str, auto: bool = False):
    with open(path, "rb") as fh:
        if fh.read(4) == BINARY_MAGIC:
            fh.seek(0)
            g = read_binary(fh)
            return auto_weight(g) if auto else g
        fh.seek(0)
        return load_edge_list(fh, weighted=not auto)


def _resolve_delta(delta, n):
    if delta != "auto":
        return delta
    if n < 2:
        raise ValueError("--delta auto (1/n) needs n >= 2")
    return 1.0 / n


def run_record(result, *, algo, model, eps, delta, k, graph_path, graph, threads, timing=True):
    """Flat, key-ordered JSON record of one run."""
    rec = {
        "schema": SCHEMA,
        "algo": algo,
        "model": model,
        "graph": graph_path,
        "n": graph.n,
        "m": graph.m,
        "k": k,
        "eps": eps,
        "delta": delta,
        "seeds": [int(s) for s in result.seeds],
        "est_influence": result.est_influence,
        "rr_count_main": result.rr_count_main,
        "rr_count_verify": result.rr_count_verify,
        "rr_count_total": result.rr_count_total,
        "iterations": result.iterations,
        "stop_reason": result.stop_reason.value,
        "rng_seed": result.rng_seed,
        "threads": threads,
        "peak_rr_memory_bytes": result.peak_memory_bytes,
    }
    if timing:
        rec["wall_ms"] = round(result.wall_ms, 3)
    return rec


def _emit(records, args):
    out = io.StringIO()
    if getattr(args, "csv", False):
        fields = list(records[0])
        writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in rec.items()})
    else:
        for rec in records:
            out.write(json.dumps(rec) + "\n")
    text = out.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _split_from(args, parser):
    given = [args.eps1, args.eps2, args.eps3]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        parser.error("--eps1, --eps2 and --eps3 must be given together")
    return EpsilonSplit(*given)


def _run_algo(graph, algo, k, eps, delta, seed, model, threads, split=None, weights=None):
    if weights is not None:
        return tvm_run(graph, weights, k, eps, delta, algo, seed, model=model, threads=threads,
                       **({"split": split} if algo == "ssa" else {}))
    if algo == "ssa":
        return ssa(graph, k, eps, delta, split, seed, model=model, threads=threads)
    return dssa(graph, k, eps, delta, seed, model=model, threads=threads)


# subcommands ---------------------------------------------------------------

def cmd_convert(args, parser):
    with open(args.input, "rb") as fh:
        if fh.read(4) == BINARY_MAGIC:
            fh.seek(0)
            graph = read_binary(fh)
            if args.auto_weight:
                graph = auto_weight(graph)
        elif args.remap:
            fh.seek(0)
            graph, labels = load_raw_edge_list(fh, weighted=False if args.auto_weight else None)
            if args.labels:
                with open(args.labels, "w", encoding="utf-8") as lf:
                    lf.writelines(f"{i} {lab}\n" for i, lab in enumerate(labels))
        else:
            fh.seek(0)
            graph = load_edge_list(fh, weighted=not args.auto_weight)
    if args.undirected:
        graph = undirected(graph)
        if args.auto_weight:
            graph = auto_weight(graph)
    to_text = args.to == "txt" or (args.to is None and not args.output.endswith(".bin"))
    with open(args.output, "wb") as fh:
        (write_edge_list if to_text else write_binary)(graph, fh)
    print(json.dumps({"output": args.output, "n": graph.n, "m": graph.m,
                      "self_loops_dropped": graph.dropped_self_loops}))


def cmd_im(args, parser, weights_path=None):
    graph = load_graph_file(args.graph, args.auto_weight)
    delta = _resolve_delta(args.delta, graph.n)
    threads = _threads(args.threads)
    weights = None
    if weights_path:
        with open(weights_path, "rb") as fh:
            weights = load_weights(fh, graph.n)
    split = _split_from(args, parser)
    if split is not None and args.algo != "ssa":
        parser.error("--eps1/--eps2/--eps3 apply to --algo ssa only")
    result = _run_algo(graph, args.algo, args.k, args.eps, delta, args.seed, args.model, threads,
                       split, weights)
    rec = run_record(result, algo=args.algo if weights is None else f"tvm-{args.algo}",
                     model=args.model, eps=args.eps, delta=delta, k=args.k, graph_path=args.graph,
                     graph=graph, threads=threads, timing=not args.no_timing)
    if weights is not None:
        rec["gamma"] = weights.gamma
    _emit([rec], args)


def cmd_tvm(args, parser):
    cmd_im(args, parser, weights_path=args.weights)


def cmd_eval(args, parser):
    graph = load_graph_file(args.graph, args.auto_weight)
    mean, stderr = mc_influence(graph, args.seeds, args.model, args.runs, args.seed)
    _emit([{"schema": "stopstare.eval/1", "graph": args.graph, "model": args.model,
            "seeds": args.seeds, "runs": args.runs, "mean": mean, "stderr": stderr}], args)


def cmd_exact(args, parser):
    graph = load_graph_file(args.graph, args.auto_weight)
    what = args.what or ("influence" if args.seeds else "opt")
    if what == "influence":
        if not args.seeds:
            parser.error("exact influence needs --seeds")
        rep = exact_influence(graph, args.seeds, args.model)
        rec = {"schema": "stopstare.exact/1", "what": "influence", "graph": args.graph,
               "model": args.model, "seeds": args.seeds, "influence": rep.influence,
               "outcomes_enumerated": rep.outcomes_enumerated}
    else:
        if args.k is None:
            parser.error("exact opt needs --k")
        seeds, value = exact_opt(graph, args.k, args.model)
        rec = {"schema": "stopstare.exact/1", "what": "opt", "graph": args.graph,
               "model": args.model, "k": args.k, "seeds": seeds, "influence": value}
    _emit([rec], args)


def cmd_bench(args, parser):
    if args.suite == "guarantees":
        from .harness import SyntheticSpec, binomial_floor, generate, guarantee_trial

        graph = generate(SyntheticSpec("erdos_renyi", 8, p=0.3, weight_rule="auto", seed=args.seed))
        records = []
        for model in (args.model,) if args.model else ("ic", "lt"):
            for algo in args.algos:
                rep = guarantee_trial(graph, 2, 0.3, 0.2, algo, args.trials, model, args.seed)
                records.append({"schema": "stopstare.guarantee/1", "algo": algo, "model": model,
                                "k": 2, "eps": 0.3, "delta": 0.2, "trials": args.trials,
                                "opt": rep.opt, "pass_fraction": rep.pass_fraction,
                                "required": binomial_floor(0.8, args.trials)})
        _emit(records, args)
        return
    if not args.graph:
        parser.error("bench needs --graph (or --suite guarantees)")
    graph = load_graph_file(args.graph, args.auto_weight)
    delta = _resolve_delta(args.delta, graph.n)
    threads = _threads(args.threads)
    model = args.model or "lt"
    records = []
    for k in args.ks:
        for algo in args.algos:
            for r in range(args.runs):
                res = _run_algo(graph, algo, k, args.eps, delta, args.seed + r, model, threads)
                rec = run_record(res, algo=algo, model=model, eps=args.eps, delta=delta, k=k,
                                 graph_path=args.graph, graph=graph, threads=threads,
                                 timing=not args.no_timing)
                records.append(rec)
    _emit(records, args)


# parser ------------------------------------------------------------------------

def _common(p, model_required=True):
    p.add_argument("--graph", required=True)
    p.add_argument("--model", choices=["ic", "lt"], required=model_required)
    p.add_argument("--auto-weight", action="store_true",
                   help="ignore file weights and use 1/in-degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.add_argument("--csv", action="store_true")


def _algo_flags(p):
    p.add_argument("--algo", choices=["ssa", "dssa"], default="dssa")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--eps", type=_unit_interval, default=0.1)
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--eps3", type=float)
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--no-timing", action="store_true", help="omit wall_ms from records")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stopstare", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="text <-> binary graph conversion")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--to", choices=["bin", "txt"])
    p.add_argument("--undirected", action="store_true", help="emit both arcs for every edge")
    p.add_argument("--auto-weight", action="store_true")
    p.add_argument("--remap", action="store_true",
                   help="input is a header-less edge list with arbitrary node labels")
    p.add_argument("--labels", help="with --remap: write 'new_id label' lines here")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("im", help="influence maximization with SSA / D-SSA")
    _common(p)
    _algo_flags(p)
    p.set_defaults(func=cmd_im)

    p = sub.add_parser("tvm", help="targeted viral marketing (weighted roots)")
    _common(p)
    _algo_flags(p)
    p.add_argument("--weights", required=True, help="'node_id weight' lines")
    p.set_defaults(func=cmd_tvm)

    p = sub.add_parser("eval", help="Monte-Carlo influence of a seed set")
    _common(p)
    p.add_argument("--seeds", type=_int_list, required=True)
    p.add_argument("--runs", type=_positive_int, default=10_000)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("exact", help="exact influence / OPT_k on tiny graphs")
    p.add_argument("what", nargs="?", choices=["influence", "opt"])
    _common(p)
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--k", type=_positive_int)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bench", help="batch runs emitting one record per run")
    p.add_argument("--graph")
    p.add_argument("--model", choices=["ic", "lt"])
    p.add_argument("--auto-weight", action="store_true")
    p.add_argument("--suite", choices=["guarantees"])
    p.add_argument("--algos", type=lambda s: [a for a in s.split(",") if a], default=["ssa", "dssa"])
    p.add_argument("--ks", type=_int_list, default=[1, 50])
    p.add_argument("--runs", type=_positive_int, default=1)
    p.add_argument("--trials", type=_positive_int, default=200)
    p.add_argument("--eps", type=_unit_interval, default=0.1)
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=_positive_int)
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("--output", "-o")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "algos", None):
        bad = [a for a in args.algos if a not in ("ssa", "dssa")]
        if bad:
            parser.print_usage(sys.stderr)
            print(f"stopstare: error: unknown algorithm(s) {bad}", file=sys.stderr)
            return 2
    try:
        args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (StopStareError, ValueError, IndexError, OSError) as exc:
        print(f"stopstare: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
