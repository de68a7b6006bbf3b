"""Homogeneous group cochains with values in forms on R^n: the boundary
delta_bar, covariance, homogeneous <-> inhomogeneous coordinates and the
total-complex closedness check for the Chern cocycles."""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .chern_weil import chern_cocycle
from .conventions import total_d_sign
from .exact import Q, SingularPointError, registered
from .forms import BiForm, d, pullback
from .jets import JetDiffeo, compose, generic_diffeo, identity, random_diffeo

__all__ = ["GroupCochain", "delta_bar", "covariance_check", "chern_group_cochain",
           "chern_components", "total_closedness", "hom_to_inhom", "inhom_to_hom",
           "hom_inhom_convert", "assert_regular_differentiable", "ClosednessReport",
           "random_point", "UnsupportedInput", "worker_count"]

WORKERS_ENV = "HOPF_CHERN_WORKERS"


class UnsupportedInput(ValueError):
    pass


def worker_count():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    items = list(items)
    w = min(worker_count(), len(items)) or 1
    if w == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class GroupCochain:
    p: int
    evaluator: Callable
    tag: str = ""
    n: int | None = None
    inhomogeneous: bool = False

    @property
    def arity(self):
        return self.p if self.inhomogeneous else self.p + 1

    def __call__(self, *tup):
        if len(tup) == 1 and isinstance(tup[0], (list, tuple)):
            tup = tuple(tup[0])
        if len(tup) != self.arity:
            raise ValueError(f"{self.tag or 'cochain'} of degree {self.p} needs "
                             f"{self.arity} entries, got {len(tup)}")
        out = self.evaluator(tuple(tup))
        if any(g < 100 or g >= 1000 for gens in out.terms for g in gens):
            raise ValueError("group cochain values must be forms on R^n only")
        return out


def delta_bar(c: GroupCochain) -> GroupCochain:
    """(delta_bar c)(r_0..r_{p+1}) = sum_i (-1)^i c(r_0..^r_i..r_{p+1})."""
    if c.inhomogeneous:
        raise UnsupportedInput("delta_bar acts on homogeneous cochains")
    def ev(tup):
        out = BiForm.zero()
        for i in range(len(tup)):
            v = c(tup[:i] + tup[i + 1:])
            out = out + (v if i % 2 == 0 else -v)
        return out
    return GroupCochain(c.p + 1, ev, f"delta_bar({c.tag})", c.n)


@dataclass
class CheckResult:
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


def covariance_check(c: GroupCochain, rho: JetDiffeo, tup) -> CheckResult:
    """c(r_0 o rho, .., r_p o rho) == rho^* c(r_0, .., r_p), exactly."""
    tup = tuple(tup)
    lhs = c(tuple(compose(r, rho) for r in tup))
    rhs = pullback(c(tup), rho)
    diff = (lhs - rhs).simplify()
    if diff.is_zero():
        return CheckResult(True)
    return CheckResult(False, {"lhs": str(lhs), "rhs": str(rhs), "difference": str(diff)})


def assert_regular_differentiable(form: BiForm, tup):
    """Every denominator is a product of powers of det(phi_a') for the tuple."""
    allowed = {phi.det_id for phi in tup if phi.det_id is not None}
    for gens, coef in form.terms.items():
        for rid, _ in coef.den:
            if rid not in allowed:
                raise AssertionError(
                    f"coefficient of {gens} has a denominator {registered(rid)} "
                    "that is not a Jacobian determinant of the tuple")
    return True


def chern_group_cochain(J, p, n=None, mode="base", check=True) -> GroupCochain:
    J = tuple(J)

    def ev(tup):
        out = chern_cocycle(J, p, tup, mode=mode, check=check)
        assert_regular_differentiable(out, tup)
        return out
    return GroupCochain(p, ev, f"C_{''.join(map(str, J))}^({p})", n)


def chern_components(J, n=None, mode="base", check=True):
    """[C_J^{(0)}, ..., C_J^{(2|J|)}]."""
    return [chern_group_cochain(J, p, n, mode, check) for p in range(2 * sum(J) + 1)]


# ------------------------------------------------------------ conversions

def _chain_products(phis):
    """(phi_1...phi_p, phi_2...phi_p, ..., phi_p, e)."""
    n = phis[0].n if phis else None
    out = [identity(n)] if phis else []
    acc = None
    for phi in reversed(phis):
        acc = phi if acc is None else compose(phi, acc)
        out.append(acc)
    return tuple(reversed(out))


def hom_to_inhom(c: GroupCochain, n=None) -> GroupCochain:
    """c(phi_1..phi_p) = c_bar(phi_1...phi_p, ..., phi_p, e); at p = 0 this is c_bar(e)."""
    if c.inhomogeneous:
        raise UnsupportedInput("cochain is already inhomogeneous")
    nn = n or c.n

    def ev(phis):
        phis = list(phis)
        if not phis:
            if nn is None:
                raise UnsupportedInput("dimension n needed for degree-0 conversion")
            return c((identity(nn),))
        return c(_chain_products(phis))
    return GroupCochain(c.p, ev, c.tag + "[inhom]", nn, inhomogeneous=True)


def inhom_to_hom(c_inh: GroupCochain, quotients=None, last=None):
    """c_bar(r_0..r_p) = r_p^* c(r_0 r_1^{-1}, .., r_{p-1} r_p^{-1}).

    No diffeomorphism is ever inverted: the quotients r_{i-1} r_i^{-1} and
    r_p must be supplied.  Returns the value together with the
    reconstructed homogeneous tuple."""
    if quotients is None or last is None:
        raise UnsupportedInput("the inverse conversion needs the successive quotients "
                               "and the last entry supplied explicitly")
    if not c_inh.inhomogeneous:
        raise UnsupportedInput("expected an inhomogeneous cochain")
    quotients = tuple(quotients)
    chain = [last]
    for q in reversed(quotients):
        chain.append(compose(q, chain[-1]))
    tup = tuple(reversed(chain))
    return pullback(c_inh(quotients), last), tup


def hom_inhom_convert(c: GroupCochain, direction="hom_to_inhom", **kw):
    if direction == "hom_to_inhom":
        return hom_to_inhom(c, kw.get("n"))
    if direction == "inhom_to_hom":
        return inhom_to_hom(c, kw.get("quotients"), kw.get("last"))
    raise ValueError(f"unknown direction {direction!r}")


# ------------------------------------------------------------ closedness

def random_point(rng, names, bound=1000):
    out = {}
    for nm in names:
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        out[nm] = Q(num, den)
    return out


@dataclass
class ClosednessReport:
    J: tuple
    n: int
    mode: str
    seed: int | None
    entries: list = field(default_factory=list)
    wall_time: float | None = None

    @property
    def ok(self):
        return all(e["status"] == "pass" for e in self.entries)

    def to_json(self, timing=False):
        out = {"class": list(self.J), "n": self.n, "mode": self.mode, "seed": self.seed,
               "ok": self.ok, "identities": sorted(self.entries, key=lambda e: e["bidegree"])}
        if timing and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _residual(components, p, tup):
    """delta_bar C^{(p)} + (-1)^p d C^{(p+1)} on a (p+2)-tuple; p = -1 gives d C^{(0)}."""
    top = len(components) - 1
    out = BiForm.zero()
    if p >= 0:
        out = out + delta_bar(components[p])(tup)
    if p + 1 <= top:
        out = out + d(components[p + 1](tup)) * total_d_sign(p)
    return out


def _bidegree(J, p):
    # identity p lives in group degree p+1, form degree 2|J| - p
    return [p + 1, 2 * sum(J) - p]


def _max_degree(form):
    deg = 0
    for c in form.terms.values():
        if c.num.terms:
            deg = max(deg, c.num.degree())
    return deg


def total_closedness(J, n, mode="symbolic", components=None, points=20, seed=0,
                     tuples=2, jet_order=3, degree=2):
    """Check every bidegree of (delta_bar + (-1)^p d) C = 0.

    ``symbolic``: generic jets of the given order, the residual must vanish
    identically.  ``randomized``: random rational diffeos, the residual is
    evaluated at ``points`` random rational points per identity and tuple."""
    J = tuple(J)
    if components is None:
        components = chern_components(J, n)
    rng = random.Random(seed)
    t_start = time.perf_counter()
    rep = ClosednessReport(J, n, mode, seed)
    levels = list(range(-1, len(components)))
    xnames = [f"x{i}" for i in range(1, n + 1)]

    if mode == "symbolic":
        def job(p):
            tup = tuple(generic_diffeo(a, n, jet_order) for a in range(p + 2))
            res = _residual(components, p, tup).simplify()
            entry = {"bidegree": _bidegree(J, p), "status": "pass" if res.is_zero() else "fail",
                     "jet_order": jet_order, "degree": _max_degree(res)}
            if not res.is_zero():
                entry["witness"] = str(res)
            return entry
        rep.entries = _pmap(job, levels)
    elif mode == "randomized":
        plan = []
        for p in levels:
            for _ in range(tuples):
                tup = tuple(random_diffeo(rng, n, degree) for _ in range(p + 2))
                pts = []
                for _ in range(points):
                    pts.append(random_point(rng, xnames))
                plan.append((p, tup, pts))

        def job(item):
            p, tup, pts = item
            res = _residual(components, p, tup)
            lrng = random.Random(hash((seed, p, len(pts))) & 0xffffffff)
            nonzero = None
            evaluated = 0
            resampled = 0
            for pt in pts:
                while True:
                    try:
                        vals = res.evaluate(pt)
                        break
                    except SingularPointError:
                        resampled += 1
                        pt = random_point(lrng, xnames)
                evaluated += 1
                if vals and nonzero is None:
                    nonzero = {"point": {k: str(v) for k, v in pt.items()},
                               "values": {"^".join(map(str, g)): str(v) for g, v in vals.items()}}
            return p, evaluated, resampled, _max_degree(res), nonzero

        results = _pmap(job, plan)
        for p in levels:
            rs = [r for r in results if r[0] == p]
            fails = [r[4] for r in rs if r[4] is not None]
            entry = {"bidegree": _bidegree(J, p), "status": "fail" if fails else "pass",
                     "points": sum(r[1] for r in rs), "resampled": sum(r[2] for r in rs),
                     "tuples": len(rs), "degree": max(r[3] for r in rs)}
            if fails:
                entry["witness"] = fails[0]
            rep.entries.append(entry)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rep.wall_time = time.perf_counter() - t_start
    return rep
