"""Compare RR-set usage of SSA and D-SSA on a synthetic Erdos-Renyi graph.

    python scripts/rr_economy.py --n 1000 --p 0.01 --k 50 --runs 20 --model lt
"""
import argparse
import json
import statistics

from stopstare import dssa, ssa
from stopstare.harness import SyntheticSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--p", type=float, default=0.01)
    ap.add_argument("--k", type=int, default=50)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--model", choices=["ic", "lt"], default="lt")
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--graph-seed", type=int, default=5)
    args = ap.parse_args()

    g = generate(SyntheticSpec("erdos_renyi", args.n, p=args.p, weight_rule="auto", seed=args.graph_seed))
    delta = 1.0 / g.n
    rows = []
    for r in range(args.runs):
        a = ssa(g, args.k, args.eps, delta, None, 1000 + r, model=args.model)
        b = dssa(g, args.k, args.eps, delta, 1000 + r, model=args.model)
        rows.append({"run": r, "ssa_total": a.rr_count_total, "ssa_main": a.rr_count_main,
                     "ssa_verify": a.rr_count_verify, "dssa_total": b.rr_count_total,
                     "ssa_ms": round(a.wall_ms, 1), "dssa_ms": round(b.wall_ms, 1)})
        print(json.dumps(rows[-1]))
    print(json.dumps({
        "n": g.n, "m": g.m, "k": args.k, "eps": args.eps, "model": args.model,
        "median_ssa": statistics.median(r["ssa_total"] for r in rows),
        "median_dssa": statistics.median(r["dssa_total"] for r in rows),
    }))


if __name__ == "__main__":
    main()
