"""Command-line entry point.

    hopf-chern chern   --n 1 --class 1 --level 1 --tuple data/two_diffeos.json
    hopf-chern verify  cocycle --n 2 --class 1,1 --mode randomized --points 20
    hopf-chern hopf    probe --gen X1 --n 2
    hopf-chern hopf    verify --suite sdelta --n 2
    hopf-chern cyclic  verify --suite tau --q 2 --n 1
    hopf-chern extract --n 1 --class c1 --emit tensor.json
    hopf-chern suite   --n 1 --all

JSON goes to stdout (or ``--report``); exit status 0 when every check
passes, 1 on a failed check, 2 on a usage error."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass, field

from .chern_weil import TruncationError, chern_cocycle
from .crossed import coproduct_probe
from .group_cochain import WORKERS_ENV, total_closedness
from .hopf import D, HopfElement, X, Y, coproduct, set_dimension
from .jets import diffeo_to_json, load_tuple
from .notation import form_latex, form_text, tensor_latex, tensor_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int
    J: tuple | None = None
    mode: str | None = None
    seed: int = 0
    points: int = 20
    report: str | None = None
    latex: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("n must be at least 1")
        if self.J is not None and sum(self.J) > self.n:
            raise UsageError(f"|J| = {sum(self.J)} exceeds n = {self.n}")

    def to_json(self):
        out = asdict(self)
        out.pop("report")
        out.pop("latex")
        out["J"] = list(self.J) if self.J is not None else None
        return out


def _class(text, n):
    from .suites import parse_class
    try:
        return parse_class(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_GEN = re.compile(r"^(?:([Xx])(\d+)|([Yy])(\d+)[,_]?(\d+)|([Dd]|delta)(\d+)_(\d+))$")


def parse_gen(text):
    """X1, Y1_2 (Y_1^2), D1_12 (delta^1_{12}); single-digit indices may be run together."""
    m = _GEN.match(text.strip())
    if not m:
        raise UsageError(f"cannot read generator {text!r}")
    if m.group(1):
        return X(int(m.group(2)))
    if m.group(3):
        return Y(int(m.group(4)), int(m.group(5)))
    return D(int(m.group(7)), *[int(c) for c in m.group(8)])


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(cfg: RunConfig, report, latex=None, out=sys.stdout):
    report = dict(report)
    report["config"] = cfg.to_json()
    text = _dump(report)
    if cfg.report:
        with open(cfg.report, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    if cfg.latex and latex is not None:
        with open(cfg.latex, "w") as fh:
            fh.write(latex + "\n")
    return EXIT_OK if report.get("ok", True) else EXIT_FAIL


# ------------------------------------------------------------ subcommands

def cmd_chern(args, out):
    J = _class(args.cls, args.n)
    cfg = RunConfig("chern", args.n, J, args.mode, args.seed, report=args.report,
                    latex=args.latex, extra={"level": args.level, "tuple": args.tuple})
    try:
        tup = load_tuple(args.tuple)
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read tuple file: {exc}") from None
    if any(phi.n != args.n for phi in tup):
        raise UsageError("tuple dimension differs from --n")
    if len(tup) != args.level + 1:
        raise UsageError(f"level {args.level} needs {args.level + 1} diffeomorphisms")
    try:
        val = chern_cocycle(J, args.level, tuple(tup), mode=args.mode).simplify()
    except TruncationError as exc:
        raise UsageError(str(exc)) from None
    if args.out == "text":
        out.write(form_text(val) + "\n")
        return EXIT_OK
    if args.out == "latex":
        out.write(form_latex(val) + "\n")
        return EXIT_OK
    report = {"ok": True, "class": list(J), "n": args.n, "level": args.level,
              "mode": args.mode, "tuple": [diffeo_to_json(phi) for phi in tup],
              "value": form_text(val)}
    return _emit(cfg, report, form_latex(val), out)


def cmd_verify(args, out):
    if args.what != "cocycle":
        raise UsageError(f"unknown verification {args.what!r}")
    J = _class(args.cls, args.n)
    cfg = RunConfig("verify", args.n, J, args.mode, args.seed, args.points, args.report)
    t0 = time.perf_counter()
    rep = total_closedness(J, args.n, mode=args.mode, points=args.points, seed=args.seed)
    data = rep.to_json(timing=args.timing)
    if args.timing:
        data["wall_time"] = round(time.perf_counter() - t0, 3)
    return _emit(cfg, data, None, out)


def cmd_hopf(args, out):
    from . import suites
    set_dimension(args.n)
    cfg = RunConfig("hopf", args.n, None, args.action, args.seed, report=args.report,
                    latex=args.latex)
    if args.action == "probe":
        if not args.gen:
            raise UsageError("hopf probe needs --gen")
        g = parse_gen(args.gen)
        h = HopfElement.gen(g)
        probed = coproduct_probe(h, args.n, seed=args.seed)
        alg = coproduct(h)
        report = {"ok": probed == alg, "generator": str(h), "probed": tensor_text(probed),
                  "algebraic": tensor_text(alg)}
        return _emit(cfg, report, tensor_latex(probed), out)
    if args.action == "verify":
        if args.suite not in suites.SUITES:
            raise UsageError(f"unknown hopf suite {args.suite!r}")
        return _emit(cfg, suites.SUITES[args.suite](args.n, seed=args.seed), None, out)
    raise UsageError(f"unknown hopf action {args.action!r}")


def cmd_cyclic(args, out):
    from . import suites
    if args.action != "verify":
        raise UsageError(f"unknown cyclic action {args.action!r}")
    cfg = RunConfig("cyclic", args.n, None, args.suite, args.seed, report=args.report,
                    extra={"q": args.q})
    qs = tuple(range(1, args.q + 1))
    if args.suite == "tau":
        rep = suites.cyclic_absolute(args.n, qs, seed=args.seed, identities=("tau",))
    elif args.suite == "bB":
        rep = suites.cyclic_absolute(args.n, qs, seed=args.seed, identities=("bb", "BB", "bB"))
    elif args.suite == "relative":
        rep = suites.cyclic_relative(args.n, args.q, seed=args.seed)
    else:
        raise UsageError(f"unknown cyclic suite {args.suite!r}")
    return _emit(cfg, rep, None, out)


def cmd_extract(args, out):
    from .extract import extract_class, phi_integrand_check
    from .group_cochain import chern_group_cochain
    J = _class(args.cls, args.n)
    cfg = RunConfig("extract", args.n, J, None, args.seed, report=args.report, latex=args.latex)
    try:
        exts = extract_class(J, args.n, seed=args.seed)
    except AssertionError as exc:
        return _emit(cfg, {"ok": False, "class": list(J), "witness": str(exc)}, None, out)
    comps = [e.to_json() for e in exts]
    report = {"ok": True, "class": list(J), "n": args.n, "components": comps}
    if args.n == 1 and len(exts) == 1 and exts[0].q == 1:
        ph = phi_integrand_check(exts[0].tensor, chern_group_cochain(J, 1, 1), seed=args.seed)
        report["phi_check"] = ph.to_json()
        report["ok"] = ph.ok
    latex = "\n".join(tensor_latex(e.tensor) for e in exts)
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(_dump({"class": list(J), "n": args.n, "components": comps}))
    return _emit(cfg, report, latex, out)


def cmd_suite(args, out):
    from .suites import run_suite
    cfg = RunConfig("suite", args.n, None, "all" if args.all else "quick", args.seed,
                    args.points, args.report)
    return _emit(cfg, run_suite(args.n, full=args.all, seed=args.seed, points=args.points),
                 None, out)


# ------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="hopf-chern", description="Hopf cyclic Chern classes relative to GL_n.")
    p.add_argument("--workers", type=int, default=None,
                   help=f"cap on the work pool (also {WORKERS_ENV})")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, seed=True, report=True, latex=False):
        sp.add_argument("--n", type=int, required=True)
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        if report:
            sp.add_argument("--report", default=None, help="write the JSON report here")
        if latex:
            sp.add_argument("--latex", default=None, help="write a LaTeX rendering here")

    sp = sub.add_parser("chern", help="evaluate C_J^{(p)} on a tuple")
    common(sp, latex=True)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--tuple", required=True)
    sp.add_argument("--mode", choices=["base", "frame"], default="base")
    sp.add_argument("--out", choices=["json", "latex", "text"], default="json")
    sp.set_defaults(func=cmd_chern)

    sp = sub.add_parser("verify", help="total-complex closedness of C_J")
    sp.add_argument("what", choices=["cocycle"])
    common(sp)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--mode", choices=["symbolic", "randomized"], default="symbolic")
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--timing", action="store_true", help="add wall time (not deterministic)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hopf", help="Hopf algebra probes and identities")
    sp.add_argument("action", choices=["probe", "verify"])
    common(sp, latex=True)
    sp.add_argument("--gen", default=None)
    sp.add_argument("--suite", default="sdelta")
    sp.set_defaults(func=cmd_hopf)

    sp = sub.add_parser("cyclic", help="cyclic structure identities")
    sp.add_argument("action", choices=["verify"])
    common(sp)
    sp.add_argument("--suite", default="tau")
    sp.add_argument("--q", type=int, default=2)
    sp.set_defaults(func=cmd_cyclic)

    sp = sub.add_parser("extract", help="Hopf cyclic tensor of C_J")
    common(sp, latex=True)
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--emit", default=None, help="write the tensor JSON here")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("suite", help="every check in dimension n")
    common(sp)
    sp.add_argument("--all", action="store_true", help="include the slower operator checks")
    sp.add_argument("--points", type=int, default=20)
    sp.set_defaults(func=cmd_suite)
    return p


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.workers is not None:
            os.environ[WORKERS_ENV] = str(max(1, args.workers))
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        err.write(parser.format_usage())
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
