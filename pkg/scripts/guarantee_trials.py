"""Empirical approximation-guarantee rates against exhaustive OPT on small random graphs.

    python scripts/guarantee_trials.py --trials 200 --graphs 5
"""
import argparse
import json

from stopstare.harness import SyntheticSpec, binomial_floor, generate, guarantee_trial


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.3)
    ap.add_argument("--delta", type=float, default=0.2)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--graphs", type=int, default=3, help="number of random graphs")
    args = ap.parse_args()

    floor = binomial_floor(1 - args.delta, args.trials)
    for gs in range(1, args.graphs + 1):
        g = generate(SyntheticSpec("erdos_renyi", args.n, p=args.p, weight_rule="auto", seed=gs))
        for model in ("ic", "lt"):
            for algo in ("ssa", "dssa"):
                rep = guarantee_trial(g, args.k, args.eps, args.delta, algo, args.trials, model, seed=gs)
                print(json.dumps({
                    "graph_seed": gs, "m": g.m, "model": model, "algo": algo, "opt": rep.opt,
                    "pass_fraction": rep.pass_fraction, "required": round(floor, 4),
                    "min_ratio": round(min(rep.influences) / rep.opt, 4),
                    "mean_rr": sum(rep.rr_counts) / len(rep.rr_counts),
                }))


if __name__ == "__main__":
    main()
