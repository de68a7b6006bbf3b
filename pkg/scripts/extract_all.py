"""Extract the Hopf cyclic tensor of every C_J with |J| <= n, n = 1, 2."""
import argparse
import json
from pathlib import Path

from hopf_chern.extract import extract_class
from hopf_chern.notation import tensor_latex, tensor_text
from hopf_chern.suites import classes_for

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="reports/extracted")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for n in (1, 2):
        for J in classes_for(n):
            name = f"n{n}_c{''.join(map(str, J))}"
            exts = extract_class(J, n, seed=args.seed)
            data = {"n": n, "class": list(J), "components": [e.to_json() for e in exts]}
            (out / f"{name}.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
            (out / f"{name}.tex").write_text(
                "\n".join(tensor_latex(e.tensor) for e in exts) + "\n")
            for e in exts:
                print(f"{name} level {e.p}: {tensor_text(e.tensor)}")
