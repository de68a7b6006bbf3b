"""Operator semantics of H_n on the crossed product: monomials f U*_phi,
their product, the action of words, and exact linear-algebra probes that
recover coproducts and brackets from the action alone."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .exact import LocalizedPoly, Poly, Q, SingularPointError
from .hopf import (HopfElement, TensorElement, gen_weight, get_dimension, h_words,
                   set_dimension, word_weight)
from .linalg import solve_exact
from .jets import (JetDiffeo, X_field, Y_field, compose, frame_matrix, gamma_coeff,
                   identity, prolong, random_diffeo)

__all__ = ["CrossedMonomial", "act", "act_word", "act_gen", "crossed_mul",
           "random_monomial", "coproduct_probe", "bracket_probe", "operator_equal",
           "OrderTooLow", "torus_weight", "solve_exact", "leibniz_check"]


class OrderTooLow(RuntimeError):
    """No unique tensor over the candidate basis matches the probes."""


@dataclass(frozen=True)
class CrossedMonomial:
    """f U*_phi; the product is f U*_phi . g U*_psi = f (g o phi~) U*_{psi o phi}."""
    f: LocalizedPoly
    phi: JetDiffeo

    def __mul__(self, other):
        return crossed_mul(self, other)

    def __add__(self, other):
        if other.phi != self.phi:
            raise ValueError("sum of monomials with different group elements")
        return CrossedMonomial(self.f + other.f, self.phi)

    def __sub__(self, other):
        if other.phi != self.phi:
            raise ValueError("difference of monomials with different group elements")
        return CrossedMonomial(self.f - other.f, self.phi)

    def scale(self, c):
        return CrossedMonomial(self.f * c, self.phi)

    def equals(self, other):
        return self.phi == other.phi and (self.f - other.f).simplify().is_zero()


def crossed_mul(a: CrossedMonomial, b: CrossedMonomial) -> CrossedMonomial:
    return CrossedMonomial(a.f * b.f.substitute(prolong(a.phi)), compose(b.phi, a.phi))


def act_gen(g, a: CrossedMonomial) -> CrossedMonomial:
    n = a.phi.n
    if g[0] == "X":
        return CrossedMonomial(X_field(a.f, g[1], n), a.phi)
    if g[0] == "Y":
        return CrossedMonomial(Y_field(a.f, g[1], g[2], n), a.phi)
    return CrossedMonomial(gamma_coeff(a.phi, g[1], g[2], frame=True) * a.f, a.phi)


def act_word(gens, a: CrossedMonomial) -> CrossedMonomial:
    """Composite operator g_1 g_2 ... g_m applied right to left; D generators
    are read positionally (successors applied in the order written)."""
    for g in reversed(list(gens)):
        a = act_gen(g, a)
    return a


class _WordValues:
    """Pointwise values of normal-form words on a monomial: the U(g) part is
    applied symbolically, the delta factors are evaluated separately."""

    def __init__(self, a: CrossedMonomial):
        self.a = a
        self._u = {}
        self._g = {}

    def _upart(self, U):
        if isinstance(self.a, _LazyProduct):
            if U:
                raise ValueError("lazy product supports multiplication operators only")
            return _LazyEval(self.a)
        v = self._u.get(U)
        if v is None:
            v = act_word(U, self.a).f
            self._u[U] = v
        return v

    def _gamma(self, g):
        v = self._g.get(g)
        if v is None:
            v = gamma_coeff(self.a.phi, g[1], g[2], frame=True)
            self._g[g] = v
        return v

    def value(self, w, pt, cache=None):
        F, U = w
        key = U
        if cache is not None and ("u", key) in cache:
            val = cache[("u", key)]
        else:
            val = self._upart(U).evaluate(pt)
            if cache is not None:
                cache[("u", key)] = val
        for g in F:
            if not val:
                return val
            if cache is not None and ("g", g) in cache:
                gv = cache[("g", g)]
            else:
                gv = self._gamma(g).evaluate(pt)
                if cache is not None:
                    cache[("g", g)] = gv
            val = val * gv
        return val

    def element(self, h, pt):
        cache = {}
        return sum((c * self.value(w, pt, cache) for w, c in h.terms.items()), Q(0))


class _LazyEval:
    def __init__(self, lp):
        self.lp = lp

    def evaluate(self, pt):
        return _lazy_value(self.lp, pt)


def _act_nf_word(w, a: CrossedMonomial):
    F, U = w
    return act_word(list(F) + list(U), a)


def act(h: HopfElement, a: CrossedMonomial) -> CrossedMonomial:
    out = LocalizedPoly.const(0)
    for w, c in h.terms.items():
        out = out + _act_nf_word(w, a).f * c
    return CrossedMonomial(out, a.phi)


def _random_poly(rng, n, degree, bound=3, frame=True):
    names = [f"x{i}" for i in range(1, n + 1)]
    if frame:
        names += [f"y{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    out = Poly.const(Q(rng.randint(-bound, bound), rng.randint(1, bound)))
    for k in range(1, degree + 1):
        for mono in itertools.combinations_with_replacement(names, k):
            if rng.random() < 0.6:
                c = Q(rng.randint(-bound, bound), rng.randint(1, bound))
                if c:
                    t = Poly.const(c)
                    for nm in mono:
                        t = t * Poly.var(nm)
                    out = out + t
    return LocalizedPoly(out)


class _LazyProduct(CrossedMonomial):
    """a b kept as a pair so that f (g o phi~) is only ever evaluated."""

    def __init__(self, a, b):
        object.__setattr__(self, "f", None)
        object.__setattr__(self, "phi", compose(b.phi, a.phi))
        object.__setattr__(self, "_ab", (a, b))


def _lazy_value(lp, pt):
    a, b = lp._ab
    return a.f.evaluate(pt) * b.f.evaluate(_prolong_point(a.phi, pt))


def random_monomial(rng, n, jet_order=3, f_degree=2, identity_phi=False):
    phi = identity(n) if identity_phi else random_diffeo(rng, n, jet_order)
    return CrossedMonomial(_random_poly(rng, n, f_degree), phi)


def _is_multiplication(h):
    if isinstance(h, HopfElement):
        return all(not w[1] for w in h.terms)
    return all(all(g[0] == "D" for g in gens) for _, gens in h)


def operator_equal(h1, h2, samples, exact=True):
    """Compare two operators (HopfElements or raw generator lists) on samples.

    Two multiplication operators (words in the deltas only) agree on
    f U*_phi for every f as soon as their multipliers, i.e. their values on
    1 U*_phi, agree; that comparison is done once per group element."""
    def run(h, a):
        if isinstance(h, HopfElement):
            return act(h, a)
        out = LocalizedPoly.const(0)
        for c, gens in h:
            out = out + act_word(gens, a).f * c
        return CrossedMonomial(out, a.phi)
    mult = _is_multiplication(h1) and _is_multiplication(h2)
    seen = {}
    for a in samples:
        if mult:
            if a.phi not in seen:
                unit = CrossedMonomial(LocalizedPoly.const(1), a.phi)
                seen[a.phi] = run(h1, unit).equals(run(h2, unit))
            if not seen[a.phi]:
                return False, a
        elif not run(h1, a).equals(run(h2, a)):
            return False, a
    return True, None


# ------------------------------------------------------------ linear algebra

def torus_weight(w, n):
    """Weight of a word under ad of the diagonal Y(a, a)."""
    v = [0] * n
    F, U = w
    for g in list(F) + list(U):
        if g[0] == "X":
            v[g[1] - 1] += 1
        elif g[0] == "Y":
            v[g[1] - 1] += 1
            v[g[2] - 1] -= 1
        else:
            for ell in g[2]:
                v[ell - 1] += 1
            v[g[1] - 1] -= 1
    return tuple(v)


def _point(rng, n, bound=50):
    pt = {}
    for i in range(1, n + 1):
        pt[f"x{i}"] = Q(rng.randint(-bound, bound), rng.randint(1, bound))
        for j in range(1, n + 1):
            pt[f"y{i}_{j}"] = Q(rng.randint(-bound, bound), rng.randint(1, bound))
    return pt


def _prolong_point(phi, pt):
    n = phi.n
    imgs = prolong(phi)
    return {k: v.evaluate(pt) for k, v in imgs.items()}


def _homogeneous_weights(h, n):
    ws = {word_weight(w) for w in h.terms}
    ts = {torus_weight(w, n) for w in h.terms}
    if len(ws) != 1 or len(ts) != 1:
        raise ValueError("probe needs an element homogeneous in weight and torus weight")
    return ws.pop(), ts.pop()


def _max_len(h):
    return max(len(w[0]) + len(w[1]) for w in h.terms)


PROBE_ORDERS: dict = {}


def coproduct_probe(h: HopfElement, n: int, order=None, max_len=None, seed=0,
                    samples=6, retry=True) -> TensorElement:
    """Recover Delta(h) from h(ab) = sum h1(a) h2(b) by exact linear algebra.

    The candidate basis is all pairs of normal-form words with the weight
    and torus weight of ``h`` and at most ``max_len`` generators in total.
    Probing starts at jet order max(2, weight + 1) and, when the probes do
    not determine the tensor, retries up to weight + 2.  The order that
    succeeded is recorded in ``PROBE_ORDERS``.
    """
    set_dimension(n)
    wt, _ = _homogeneous_weights(h, n)
    if order is not None or not retry:
        order = order if order is not None else wt + 2
        out = _coproduct_probe(h, n, order, max_len, seed, samples)
        PROBE_ORDERS[("coproduct", str(h), n)] = order
        return out
    last = None
    for order in range(max(2, wt + 1), wt + 3):
        try:
            out = _coproduct_probe(h, n, order, max_len, seed, samples)
        except OrderTooLow as exc:
            last = exc
            continue
        PROBE_ORDERS[("coproduct", str(h), n)] = order
        return out
    raise last


def _coproduct_probe(h, n, order, max_len, seed, samples):
    wt, tw = _homogeneous_weights(h, n)
    max_len = max_len if max_len is not None else _max_len(h) + 1
    words = [w for k in range(wt + 1) for w in h_words(n, k, max_len)]
    pairs = []
    for w1 in words:
        for w2 in h_words(n, wt - word_weight(w1), max_len - len(w1[0]) - len(w1[1])):
            if tuple(a + b for a, b in zip(torus_weight(w1, n), torus_weight(w2, n))) == tw:
                pairs.append((w1, w2))
    rng = random.Random(seed)
    rows, rhs = [], []
    need = len(pairs) + 10
    per = max(1, -(-need // samples))
    for _ in range(samples):
        a = random_monomial(rng, n, order)
        b = random_monomial(rng, n, order)
        ab = crossed_mul(a, b) if any(w[1] for w in h.terms) else _LazyProduct(a, b)
        VA, VB, VT = _WordValues(a), _WordValues(b), _WordValues(ab)
        got = 0
        while got < per:
            pt = _point(rng, n)
            try:
                ppt = _prolong_point(a.phi, pt)
                ca, cb = {}, {}
                av = {w: VA.value(w, pt, ca) for w in {p[0] for p in pairs}}
                bv = {w: VB.value(w, ppt, cb) for w in {p[1] for p in pairs}}
                tv = VT.element(h, pt)
            except SingularPointError:
                continue
            rows.append([av[p[0]] * bv[p[1]] for p in pairs])
            rhs.append(tv)
            got += 1
    sol, rank, ok = solve_exact(rows, rhs)
    if not ok:
        raise OrderTooLow(f"no tensor over {len(pairs)} candidate pairs matches h(ab)")
    if rank < len(pairs):
        raise OrderTooLow(f"probes determine only rank {rank} of {len(pairs)} unknowns; "
                          "raise the jet order or sample count")
    return TensorElement({p: c for p, c in zip(pairs, sol) if c}, 2)


def bracket_probe(h1: HopfElement, h2: HopfElement, n: int, order=None, max_len=None,
                  seed=0, samples=6) -> HopfElement:
    """Normal form of the operator commutator [h1, h2], matched on probes."""
    set_dimension(n)
    w1, t1 = _homogeneous_weights(h1, n)
    w2, t2 = _homogeneous_weights(h2, n)
    tw = tuple(a + b for a, b in zip(t1, t2))
    order = order if order is not None else w1 + w2 + 2
    max_len = max_len if max_len is not None else _max_len(h1) + _max_len(h2)
    cands = [w for w in h_words(n, w1 + w2, max_len) if torus_weight(w, n) == tw]
    rng = random.Random(seed)
    rows, rhs = [], []
    per = max(1, -(-(len(cands) + 10) // samples))
    for _ in range(samples):
        a = random_monomial(rng, n, order)
        target = (act(h1, act(h2, a)) - act(h2, act(h1, a))).f
        VA = _WordValues(a)
        got = 0
        while got < per:
            pt = _point(rng, n)
            try:
                cache = {}
                row = [VA.value(w, pt, cache) for w in cands]
                tv = target.evaluate(pt)
            except SingularPointError:
                continue
            rows.append(row)
            rhs.append(tv)
            got += 1
    if not cands:
        if any(rhs):
            raise OrderTooLow("nonzero commutator but empty candidate basis")
        return HopfElement({})
    sol, rank, ok = solve_exact(rows, rhs)
    if not ok or rank < len(cands):
        raise OrderTooLow("commutator not determined by the candidate basis")
    return HopfElement({w: c for w, c in zip(cands, sol) if c})


def leibniz_check(h: HopfElement, delta: TensorElement, pairs):
    """act(h, ab) == sum act(h1, a) act(h2, b) on given (a, b) pairs."""
    for a, b in pairs:
        lhs = act(h, crossed_mul(a, b))
        acc = LocalizedPoly.const(0)
        for (w1, w2), c in delta.terms.items():
            x = _act_nf_word(w1, a)
            y = _act_nf_word(w2, b)
            acc = acc + crossed_mul(x, y).f * c
        if not (lhs.f - acc).simplify().is_zero():
            return False, (a, b)
    return True, None
