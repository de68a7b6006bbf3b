"""Compare C_q^(q) with the antisymmetrized trace of the Gamma's for n = 2.

Prints kappa_1, the exact decomposition of C_2^(2) over antisymmetrized
trace products, and the constant for the power-sum class c1^2 - 2 c2."""
import argparse
import json

from hopf_chern.suites import antisym_oracle

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--tuples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rep = antisym_oracle(n=2, qs=(1, 2), tuples=args.tuples, seed=args.seed)
    print(json.dumps(rep, indent=2, sort_keys=True))
