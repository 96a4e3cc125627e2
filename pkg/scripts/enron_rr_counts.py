"""RR-set counts of SSA and D-SSA on the SNAP Enron e-mail graph (LT, eps=0.1, delta=1/n).

The dataset is not downloaded automatically.  Fetch ``email-Enron.txt.gz``
from SNAP, unpack it and convert it once:

    stopstare convert email-Enron.txt enron.bin --remap --auto-weight
    python scripts/enron_rr_counts.py enron.bin --ks 1,100,500

The reference count for D-SSA at k=500 is about 24,000 RR sets; counts
within a factor of 4 are treated as consistent.
"""
import argparse
import json

from stopstare import dssa, ssa
from stopstare.graph import auto_weight, load_graph

REFERENCE_K500 = 24_000


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("graph")
    ap.add_argument("--ks", default="500")
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--skip-ssa", action="store_true")
    args = ap.parse_args()

    g = auto_weight(load_graph(args.graph))
    delta = 1.0 / g.n
    for k in (int(x) for x in args.ks.split(",")):
        algos = [("dssa", lambda: dssa(g, k, args.eps, delta, args.seed, model="lt", threads=args.threads))]
        if not args.skip_ssa:
            algos.append(("ssa", lambda: ssa(g, k, args.eps, delta, None, args.seed, model="lt",
                                             threads=args.threads)))
        for name, run in algos:
            res = run()
            rec = {"k": k, "algo": name, "rr_total": res.rr_count_total,
                   "est_influence": round(res.est_influence, 2), "wall_s": round(res.wall_ms / 1e3, 2)}
            if k == 500 and name == "dssa":
                rec["within_4x_of_reference"] = REFERENCE_K500 / 4 <= res.rr_count_total <= 4 * REFERENCE_K500
            print(json.dumps(rec))


if __name__ == "__main__":
    main()
