"""Write the full suite report for n = 1 and n = 2 into a directory."""
import argparse
import json
from pathlib import Path

from hopf_chern.suites import run_suite

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="reports")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=20)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n in (1, 2):
        rep = run_suite(n, full=True, seed=args.seed, points=args.points)
        (out / f"suite_n{n}.json").write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n")
        failed = [c["name"] for c in rep["checks"] if not c["ok"]]
        print(f"n={n}: {'ok' if rep['ok'] else 'failed: ' + ', '.join(failed)}")
