"""Verification suites shared by the command line, the acceptance tests and
the scripts.  Every suite returns a JSON-ready dict with an ``ok`` flag and,
on failure, a witness; nothing here depends on wall-clock time."""

from __future__ import annotations

import itertools
import random

from .chern_weil import (antisym_trace, chern_cocycle, chern_form, matwedge, perm_sign,
                         simplicial_connection, simplicial_curvature)
from .crossed import coproduct_probe, operator_equal, random_monomial
from .cyclic import (RELATIVE, B_op, b_op, congruent, invariant_basis, random_lift,
                     random_tensor, tau, tau_power)
from .exact import Q
from .extract import (assert_jet_order, extract_class, jet_template, phi_integrand_check,
                      template_orders)
from .forms import BiForm, wedge
from .group_cochain import chern_group_cochain, total_closedness
from .hopf import (D, HopfElement, TensorElement, X, Y, coproduct, fmt_gen, s_delta,
                   set_dimension)
from .jets import gamma_form, identity, make_poly_diffeo, random_diffeo
from .linalg import solve_exact

__all__ = ["fixture_n1", "closedness", "basic_forms", "antisym_oracle", "hopf_coproduct",
           "hopf_sdelta", "hopf_structure", "cyclic_absolute", "cyclic_relative",
           "extraction_n1", "jet_order_bound", "classes_for", "parse_class", "run_suite",
           "SUITES"]


def parse_class(text, n=None):
    """'1', 'c1', '1,1', '(1,1)', 'c1c1', 'c2' -> nondecreasing tuple."""
    s = str(text).strip().lower().replace(" ", "").strip("()[]")
    if not s:
        raise ValueError("empty class")
    if "c" in s:
        parts = [p for p in s.split("c") if p]
    else:
        parts = [p for p in s.replace(";", ",").split(",") if p]
    try:
        J = tuple(sorted(int(p) for p in parts))
    except ValueError:
        raise ValueError(f"cannot read class {text!r}") from None
    if not J or J[0] < 1:
        raise ValueError(f"class indices must be positive: {text!r}")
    if n is not None and sum(J) > n:
        raise ValueError(f"|J| = {sum(J)} exceeds n = {n}")
    return J


def classes_for(n):
    """All J = (j_1 <= .. <= j_k) with |J| <= n."""
    out = []

    def rec(prefix, start, left):
        for j in range(start, left + 1):
            J = prefix + (j,)
            out.append(J)
            rec(J, j, left - j)
    rec((), 1, n)
    return sorted(out, key=lambda J: (sum(J), J))


def _result(name, ok, **details):
    out = {"name": name, "ok": bool(ok)}
    out.update(details)
    return out


# ------------------------------------------------------------ cocycles

def fixture_n1():
    """C_1 on (id, x + x^2): level 1 is -2/(1+2x) dx, levels 0 and 2 vanish."""
    e = identity(1)
    phi = make_poly_diffeo(["x1 + x1^2"])
    c1 = chern_cocycle((1,), 1, (e, phi))
    expected = BiForm.dx(1) * (Q(-2) * (phi.jacobian()[0][0]).inv())
    c0 = chern_cocycle((1,), 0, (phi,))
    c2 = chern_cocycle((1,), 2, (e, phi, make_poly_diffeo(["x1 + x1^3"])))
    ok1 = (c1 - expected).simplify().is_zero()
    return _result("fixture_n1", ok1 and c0.is_zero() and c2.is_zero(),
                   level1=str(c1), level0=str(c0), level2=str(c2))


def closedness(J, n, mode="symbolic", points=20, seed=0):
    rep = total_closedness(J, n, mode=mode, points=points, seed=seed)
    return _result(f"closedness_{mode}", rep.ok, report=rep.to_json())


def basic_forms(n=2, classes=None, seed=0):
    """Frame-mode c_J(Omega_hat) carries neither y nor dy after simplification."""
    rng = random.Random(seed)
    entries = []
    ok = True
    for J in classes or classes_for(n):
        for p in range(0, sum(J) + 1):
            tup = tuple(random_diffeo(rng, n, 2) for _ in range(p + 1))
            c = chern_form(J, simplicial_curvature(simplicial_connection(tup, "frame"),
                                                   check=False)).simplify()
            has_y = any(v.startswith("y") for v in c.variables())
            has_dy = any(g >= 1000 for g in c.generators())
            entries.append({"class": list(J), "p": p, "y_free": not has_y,
                            "dy_free": not has_dy})
            ok = ok and not has_y and not has_dy
    return _result("basic_forms", ok, n=n, entries=entries)


def _antisym(q, tup, fn):
    Gs = [gamma_form(phi) for phi in tup]
    total = BiForm.zero()
    for sigma in itertools.permutations(range(q + 1)):
        term = fn([Gs[s] for s in sigma[1:]])
        total = total + (term if perm_sign(sigma) > 0 else -term)
    return total.simplify()


def _trace(M):
    out = BiForm.zero()
    for i in range(len(M)):
        out = out + M[i][i]
    return out


def _tr_products(q):
    """All products tr(G_{a..}) ^ tr(G_{..}) ^ .. over compositions of q."""
    def comps(k):
        if k == 0:
            yield ()
            return
        for first in range(1, k + 1):
            for rest in comps(k - first):
                if not rest or first >= rest[0]:
                    yield (first,) + rest
    out = []
    for parts in comps(q):
        def fn(Gs, parts=parts):
            acc, pos = BiForm.scalar(1), 0
            for ln in parts:
                M = Gs[pos]
                for G in Gs[pos + 1:pos + ln]:
                    M = matwedge(M, G)
                acc = wedge(acc, _trace(M))
                pos += ln
            return acc
        out.append(("tr" + "".join(f"({k})" for k in parts), fn))
    return out


def antisym_oracle(n=2, qs=(1, 2), tuples=5, seed=0):
    """C_q^{(q)} = kappa_q sum_sigma sgn Tr(Gamma ^ .. ^ Gamma), one kappa_q.

    When the proportionality fails, the witness is the exact decomposition of
    C_q^{(q)} over all antisymmetrized products of traces."""
    rng = random.Random(seed)
    entries = []
    ok = True
    for q in qs:
        kappa = None
        good = True
        tups = [tuple(random_diffeo(rng, n, 2) for _ in range(q + 1)) for _ in range(tuples)]
        for tup in tups:
            lhs = chern_cocycle((q,), q, tup).simplify()
            rhs = antisym_trace(q, tup).simplify()
            if rhs.is_zero():
                good = good and lhs.is_zero()
                continue
            if kappa is None:
                kappa = _form_ratio(lhs, rhs)
                if kappa is None:
                    good = False
                    break
            good = good and (lhs - rhs * kappa).simplify().is_zero()
        entry = {"q": q, "kappa": None if kappa is None else str(kappa), "ok": good}
        if not good:
            entry["decomposition"] = _decompose(q, tups)
            entry["power_sum"] = _power_sum_check(q, tups)
        entries.append(entry)
        ok = ok and good and kappa is not None
    return _result("antisym_oracle", ok, n=n, entries=entries)


def newton_power_sum(q):
    """p_q as a combination {J: coeff} of products of elementary c_j."""
    p = {}
    for k in range(1, q + 1):
        cur = {(k,): (-1) ** (k - 1) * k}
        for i in range(1, k):
            for J, c in p[k - i].items():
                key = tuple(sorted(J + (i,)))
                cur[key] = cur.get(key, 0) + (-1) ** (i - 1) * c
        p[k] = {J: c for J, c in cur.items() if c}
    return p[q]


def _power_sum_check(q, tups):
    """The trace-basis class p_q(R) = tr(R^q) against the same oracle."""
    combo = newton_power_sum(q)
    kappa, good = None, True
    for tup in tups:
        lhs = sum((chern_cocycle(J, q, tup) * c for J, c in sorted(combo.items())),
                  BiForm.zero()).simplify()
        rhs = antisym_trace(q, tup).simplify()
        if rhs.is_zero():
            good = good and lhs.is_zero()
            continue
        if kappa is None:
            kappa = _form_ratio(lhs, rhs)
            if kappa is None:
                return {"ok": False}
        good = good and (lhs - rhs * kappa).simplify().is_zero()
    return {"combination": {"c" + "c".join(map(str, J)): c for J, c in sorted(combo.items())},
            "kappa": None if kappa is None else str(kappa), "ok": good}


def _decompose(q, tups):
    basis = _tr_products(q)
    rows, rhs = [], []
    prng = random.Random(11)
    for tup in tups:
        lhs = chern_cocycle((q,), q, tup).simplify()
        forms = [_antisym(q, tup, fn) for _, fn in basis]
        names = sorted(set().union(*(f.variables() for f in forms + [lhs])))
        for gens in sorted(set(lhs.terms).union(*(f.terms for f in forms))):
            for _ in range(3):
                pt = {v: Q(prng.randint(-9, 9), prng.randint(1, 9)) for v in names}
                try:
                    row = [f.coefficient(gens).evaluate(pt) for f in forms]
                    val = lhs.coefficient(gens).evaluate(pt)
                except ZeroDivisionError:
                    continue
                rows.append(row)
                rhs.append(val)
    sol, _, consistent = solve_exact(rows, rhs)
    if not consistent:
        return {"consistent": False}
    # certify symbolically on every tuple
    exact = all((chern_cocycle((q,), q, tup).simplify()
                 - sum((_antisym(q, tup, fn) * c for (_, fn), c in zip(basis, sol) if c),
                       BiForm.zero())).simplify().is_zero() for tup in tups)
    return {"consistent": exact, "coefficients": {nm: str(c) for (nm, _), c in zip(basis, sol)}}


def _form_ratio(lhs, rhs):
    gens = next(iter(rhs.terms))
    a, b = lhs.coefficient(gens), rhs.coefficient(gens)
    rng = random.Random(7)
    names = sorted(b.variables() | a.variables())
    for _ in range(20):
        pt = {v: Q(rng.randint(-9, 9), rng.randint(1, 9)) for v in names}
        try:
            bv = b.evaluate(pt)
            if bv:
                return a.evaluate(pt) / bv
        except ZeroDivisionError:
            continue
    return None


# ------------------------------------------------------------ Hopf structure

def hopf_coproduct(n=2, gens=None, seed=0):
    """Delta recovered by Leibniz probing equals the algebraic coproduct."""
    set_dimension(n)
    gens = gens or [X(k) for k in range(1, n + 1)]
    entries = []
    ok = True
    for g in gens:
        h = HopfElement.gen(g)
        probed = coproduct_probe(h, n, seed=seed)
        good = probed == coproduct(h)
        entries.append({"generator": fmt_gen(g), "coproduct": str(probed), "ok": good})
        ok = ok and good
    return _result("hopf_coproduct", ok, n=n, entries=entries)


def _low_generators(n):
    gens = [X(k) for k in range(1, n + 1)]
    gens += [Y(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j, n + 1):
                gens.append(D(i, j, k))
                for m in range(k, n + 1):
                    gens.append(D(i, j, k, m))
    return gens


def hopf_sdelta(n=2, products=10, seed=0):
    """S_delta^2 = Id on the generators with r <= 1 and on random products."""
    set_dimension(n)
    rng = random.Random(seed)
    gens = _low_generators(n)
    elems = [(fmt_gen(g), HopfElement.gen(g)) for g in gens]
    for _ in range(products):
        g1, g2 = rng.choice(gens), rng.choice(gens)
        elems.append((f"{fmt_gen(g1)}*{fmt_gen(g2)}",
                      HopfElement.gen(g1) * HopfElement.gen(g2)))
    bad = [name for name, h in elems if not s_delta(s_delta(h)) == h]
    return _result("hopf_sdelta", not bad, n=n, checked=len(elems), failures=bad)


def hopf_structure(n=2, samples=10, jet_order=4, seed=0):
    """Non-canonical index orders act as their structure-identity rewrites."""
    set_dimension(n)
    rng = random.Random(seed)
    mons = [random_monomial(rng, n, jet_order=jet_order) for _ in range(samples)]
    entries = []
    ok = True
    idx = range(1, n + 1)
    for i in idx:
        for r in (2, 3):
            for L in itertools.product(idx, repeat=r):
                if list(L) == sorted(L):
                    continue
                good, _ = operator_equal([(Q(1), [("D", i, L)])],
                                         HopfElement.gen(("D", i, L)), mons)
                entries.append({"delta": f"δ^{i}_{{{''.join(map(str, L))}}}",
                                "rewrite": str(HopfElement.gen(("D", i, L))), "ok": good})
                ok = ok and good
    return _result("hopf_structure", ok, n=n, samples=samples, jet_order=jet_order,
                   entries=entries)


# ------------------------------------------------------------ cyclic structure

_IDENTITIES = {
    "tau": lambda t: tau_power(t, t.q + 1) - t,
    "bb": lambda t: b_op(b_op(t)),
    "BB": lambda t: B_op(B_op(t)),
    "bB": lambda t: b_op(B_op(t)) + B_op(b_op(t)),
}


def cyclic_absolute(n=1, qs=(1, 2), count=10, seed=0, identities=("tau", "bb", "BB", "bB")):
    """tau^{q+1} = Id and b^2 = 0 on arbitrary tensors; B^2 = 0 and
    bB + Bb = 0 on normalized ones (legs in ker counit)."""
    set_dimension(n)
    rng = random.Random(seed)
    stats = {name: 0 for name in identities}
    fails = []
    wt = 2 if n == 1 else 1
    for q in qs:
        for _ in range(count):
            full = random_tensor(rng, n, q, max_weight=wt, max_len=2)
            norm = random_tensor(rng, n, q, max_weight=wt, max_len=2, normalized=True)
            for name in identities:
                t = full if name in ("tau", "bb") else norm
                if not _IDENTITIES[name](t).is_zero():
                    fails.append({"identity": name, "q": q, "tensor": str(t)})
                stats[name] += 1
    return _result("cyclic_absolute", not fails, n=n, qs=list(qs), checked=stats,
                   failures=fails[:3])


def _random_invariant(rng, n, q):
    shapes = {1: [(((2,), 0, 0),)], 2: [(((2,), 0, 0), ((), 1, 0)), (((2,), 0, 0), ((2,), 0, 0))]}
    out = TensorElement({}, q)
    for sh in shapes.get(q, []):
        if n == 1 and q == 2 and sh[1] == ((), 1, 0):
            continue
        for v in invariant_basis(n, sh):
            out = out + v.scale(Q(rng.randint(-3, 3), rng.randint(1, 3)))
    return out


def cyclic_relative(n=1, q=1, count=10, seed=0):
    """Relative operators do not depend on the lift of the classes: on
    twisted-invariant inputs and on arbitrary normalized ones."""
    set_dimension(n)
    rng = random.Random(seed)
    fails = []
    kinds = {"invariant": 0, "random": 0}
    for idx in range(count):
        kind = "invariant" if idx % 2 == 0 else "random"
        t = _random_invariant(rng, n, q) if kind == "invariant" else None
        if t is None or t.is_zero():
            kind = "random"
            t = random_tensor(rng, n, q, max_weight=1, max_len=2, relative=True,
                              normalized=True)
        kinds[kind] += 1
        lift = random_lift(rng, n, t)
        for name, op in (("tau", tau), ("b", b_op), ("B", B_op)):
            if not congruent(op(lift, RELATIVE), op(t, RELATIVE), n):
                fails.append({"operator": name, "kind": kind, "tensor": str(t),
                              "lift": str(lift)})
    return _result("cyclic_relative", not fails, n=n, q=q, lifts=count, inputs=kinds,
                   failures=fails[:3])


# ------------------------------------------------------------ extraction

def extraction_n1(samples=5, seed=0):
    exts = extract_class((1,), 1, seed=seed)
    ok = len(exts) == 1
    ext = exts[0]
    t = ext.tensor
    target = ((((("D", 1, (1, 1)),), ()),))
    single = ok and set(t.terms) == {target}
    phi = phi_integrand_check(t, chern_group_cochain((1,), 1, 1), samples=samples, seed=seed)
    ok = single and ext.checks.get("gl_invariant") is True and phi.ok
    return _result("extraction_n1", ok, extracted=ext.to_json(),
                   constant_to_delta=str(t.terms.get(target)) if single else None,
                   phi_check=phi.to_json())


def jet_order_bound(ns=(1, 2)):
    entries = []
    ok = True
    for n in ns:
        for J in classes_for(n):
            for p in range(0, sum(J) + 1):
                tpl = jet_template(J, p, n, validate=False)
                good = True
                try:
                    assert_jet_order(tpl)
                except AssertionError:
                    good = False
                entries.append({"n": n, "class": list(J), "p": p,
                                "orders": sorted(template_orders(tpl)), "ok": good})
                ok = ok and good
    return _result("jet_order_bound", ok, entries=entries)


def extraction_checks(n, seed=0):
    out = []
    ok = True
    for J in classes_for(n):
        try:
            for ext in extract_class(J, n, seed=seed):
                out.append(ext.to_json())
        except AssertionError as exc:
            ok = False
            out.append({"class": list(J), "error": str(exc)})
    return _result("extraction", ok, n=n, tensors=out)


def run_suite(n, full=True, seed=0, points=20):
    """Every check that is meaningful in dimension n."""
    checks = []
    if n == 1:
        checks.append(fixture_n1())
    for J in classes_for(n):
        mode = "symbolic" if n == 1 else "randomized"
        r = closedness(J, n, mode, points=points, seed=seed)
        r["class"] = list(J)
        checks.append(r)
    if n >= 2:
        checks.append(basic_forms(n, seed=seed))
        checks.append(antisym_oracle(n, qs=tuple(range(1, n + 1)), seed=seed))
    checks.append(hopf_coproduct(n, seed=seed))
    checks.append(hopf_sdelta(n, seed=seed))
    if full:
        checks.append(hopf_structure(n, seed=seed))
    checks.append(cyclic_absolute(n, seed=seed))
    checks.append(cyclic_relative(n, seed=seed))
    if n == 1:
        checks.append(extraction_n1(seed=seed))
    checks.append(extraction_checks(n, seed=seed))
    checks.append(jet_order_bound((n,)))
    return {"n": n, "seed": seed, "ok": all(c["ok"] for c in checks), "checks": checks}


SUITES = {
    "sdelta": hopf_sdelta,
    "structure": hopf_structure,
    "leibniz": hopf_coproduct,
}
