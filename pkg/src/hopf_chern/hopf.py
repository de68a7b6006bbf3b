"""The Hopf algebra H_n as an algebra of operators on crossed-product
monomials f U*_phi, together with its word model.

Generators
    ("X", k)          horizontal field X_k
    ("Y", a, b)       vertical field Y(a, b) = sum_mu y{mu}_{a} d/dy{mu}_{b}
    ("D", i, L)       delta^i_{L}, L = (j, k, l_1, ..., l_r)

A normal-form word is ``(F, U)``: ``F`` a sorted tuple of canonical delta
generators (they commute), ``U`` a PBW-sorted tuple of X's then Y's.
Canonical deltas have ``L`` sorted; every other index order is rewritten
through the structure identities

    delta^i_{jkm} = delta^i_{jmk} - delta^s_{jk} delta^i_{sm} + delta^s_{jm} delta^i_{sk}

and the successor rule delta^i_{L m} = [X_m, delta^i_L].
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .exact import Q, QTYPE

__all__ = ["X", "Y", "D", "HopfElement", "canon", "normal_form", "word_weight",
           "gen_weight", "one", "coproduct", "counit", "antipode", "s_delta",
           "delta_char", "TensorElement", "fmt_gen", "fmt_word", "bracket",
           "iterated_coproduct", "h_words", "is_Q_word", "set_dimension", "get_dimension"]


def X(k):
    return ("X", k)


def Y(a, b):
    return ("Y", a, b)


def D(i, *L):
    if len(L) == 1 and isinstance(L[0], (tuple, list)):
        L = tuple(L[0])
    return ("D", i, tuple(L))


def gen_weight(g):
    if g[0] == "X":
        return 1
    if g[0] == "Y":
        return 0
    return len(g[2]) - 1


def word_weight(w):
    F, U = w
    return sum(gen_weight(g) for g in F) + sum(gen_weight(g) for g in U)


def _ukey(g):
    return (0, g[1]) if g[0] == "X" else (1, g[1], g[2])


# ------------------------------------------------------------ F (commutative)
# F polynomials: dict {sorted tuple of canonical D gens: coeff}

def _fmono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def _fpoly_add(acc, poly, c=1):
    for m, v in poly.items():
        s = acc.get(m, 0) + c * v
        if s:
            acc[m] = s
        else:
            acc.pop(m, None)
    return acc


def _fpoly_mul(p1, p2):
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            m = _fmono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _fpoly_gen(g, c=1):
    return {(g,): Q(c)}


@lru_cache(maxsize=None)
def _succ_gen(g, m):
    """[X_m, D(i, M)] for canonical D(i, M), as an F polynomial."""
    _, i, M = g
    j, k = M[0], M[1]
    if m >= k:
        return {(("D", i, tuple(sorted(M + (m,)))),): Q(1)}
    if len(M) == 2:
        out = {}
        _fpoly_add(out, canon(i, (j, m, k)))
        n_max = max(i, j, k, m)
        for s in range(1, _dim_hint(n_max) + 1):
            _fpoly_add(out, _fpoly_mul(canon(s, (j, k)), canon(i, (s, m))), -1)
            _fpoly_add(out, _fpoly_mul(canon(s, (j, m)), canon(i, (s, k))), 1)
        return out
    # delta^i_{jk l1..lr m} = X_{lr}..X_{l1} delta^i_{jkm}
    poly = _succ_gen(("D", i, (j, k)), m)
    for ell in M[2:]:
        poly = _fpoly_succ(poly, ell)
    return poly


_DIM = [1]


def set_dimension(n):
    """The summation range of the structure identities (the ambient n)."""
    if n != _DIM[0]:
        _DIM[0] = n
        _succ_gen.cache_clear()
        canon.cache_clear()
        _y_act_gen.cache_clear()
        _mulgen.cache_clear()
        _move.cache_clear()
        _coproduct_gen.cache_clear()
        _antipode_gen.cache_clear()


def get_dimension():
    return _DIM[0]


def _dim_hint(_):
    return _DIM[0]


def _fpoly_succ(poly, m):
    out = {}
    for mono, c in poly.items():
        for idx, g in enumerate(mono):
            if idx and mono[idx - 1] == g:
                continue
            mult = mono.count(g)
            rest = mono[:idx] + mono[idx + 1:]
            _fpoly_add(out, _fpoly_mul({rest: c * mult}, _succ_gen(g, m)))
    return out


@lru_cache(maxsize=None)
def canon(i, L):
    """delta^i_L (positional indices) in canonical generators."""
    L = tuple(L)
    if len(L) < 2:
        raise ValueError("delta needs at least two lower indices")
    if len(L) == 2:
        return {(("D", i, tuple(sorted(L))),): Q(1)}
    return _fpoly_succ(canon(i, L[:-1]), L[-1])


@lru_cache(maxsize=None)
def _y_act_gen(a, b, g):
    """[Y(a,b), D(i, L)] as an F polynomial."""
    _, i, L = g
    out = {}
    for p, ell in enumerate(L):
        if ell == b:
            _fpoly_add(out, canon(i, L[:p] + (a,) + L[p + 1:]))
    if i == a:
        _fpoly_add(out, {(("D", b, L),): Q(1)}, -1)
    return out


def _g_act_fpoly(Z, poly):
    """Z |> F for Z in g acting by derivations."""
    out = {}
    for mono, c in poly.items():
        for idx, g in enumerate(mono):
            if idx and mono[idx - 1] == g:
                continue
            mult = mono.count(g)
            rest = mono[:idx] + mono[idx + 1:]
            dg = _succ_gen(g, Z[1]) if Z[0] == "X" else _y_act_gen(Z[1], Z[2], g)
            _fpoly_add(out, _fpoly_mul({rest: c * mult}, dg))
    return out


# ------------------------------------------------------------ U(g) PBW

def _lie_bracket(A, B):
    """[A, B] in g = R^n x| gl_n: dict {gen: coeff}."""
    if A[0] == "X" and B[0] == "X":
        return {}
    if A[0] == "Y" and B[0] == "X":
        return {("X", A[1]): Q(1)} if A[2] == B[1] else {}
    if A[0] == "X" and B[0] == "Y":
        return {("X", B[1]): Q(-1)} if B[2] == A[1] else {}
    a, b, c, d = A[1], A[2], B[1], B[2]
    out = {}
    if b == c:
        out[("Y", a, d)] = out.get(("Y", a, d), 0) + 1
    if a == d:
        out[("Y", c, b)] = out.get(("Y", c, b), 0) - 1
    return {k: Q(v) for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _mulgen(Z, word):
    """Z * (sorted word) in PBW form: tuple of (word, coeff)."""
    if not word or _ukey(Z) <= _ukey(word[0]):
        return (((Z,) + word, Q(1)),)
    w0, rest = word[0], word[1:]
    acc = {}
    for w, c in _mulgen(Z, rest):
        for w2, c2 in _mulgen(w0, w):
            acc[w2] = acc.get(w2, 0) + c * c2
    for g, c in _lie_bracket(Z, w0).items():
        for w2, c2 in _mulgen(g, rest):
            acc[w2] = acc.get(w2, 0) + c * c2
    return tuple((w, c) for w, c in acc.items() if c)


def _mul_words(u1, u2):
    acc = {u2: Q(1)}
    for Z in reversed(u1):
        nxt = {}
        for w, c in acc.items():
            for w2, c2 in _mulgen(Z, w):
                s = nxt.get(w2, 0) + c * c2
                if s:
                    nxt[w2] = s
                else:
                    nxt.pop(w2, None)
        acc = nxt
    return acc


@lru_cache(maxsize=None)
def _move(u, fmono):
    """u * F (F a monomial) rewritten as sum F' u': tuple of ((F', u'), c)."""
    if not u:
        return (((fmono, ()), Q(1)),)
    Z, rest = u[0], u[1:]
    acc = {}
    for (F1, w), c in _move(rest, fmono):
        for w2, c2 in _mulgen(Z, w):
            key = (F1, w2)
            acc[key] = acc.get(key, 0) + c * c2
        if F1:
            for F2, c3 in _g_act_fpoly(Z, {F1: Q(1)}).items():
                key = (F2, w)
                acc[key] = acc.get(key, 0) + c * c3
    return tuple((k, v) for k, v in acc.items() if v)


def _mul_basis(w1, w2):
    F1, u1 = w1
    F2, u2 = w2
    out = {}
    for (Fm, um), c in _move(u1, F2):
        F = _fmono_mul(F1, Fm)
        for u, c2 in _mul_words(um, u2).items():
            key = (F, u)
            s = out.get(key, 0) + c * c2
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


# ------------------------------------------------------------ elements

def _coerce_q(c):
    return c if isinstance(c, QTYPE) else Q(c)


class HopfElement:
    """Rational combination of normal-form words ``(F, U)``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w, c=1):
        return cls({w: _coerce_q(c)})

    @classmethod
    def gen(cls, g):
        if g[0] == "D":
            return cls({(m, ()): c for m, c in canon(g[1], g[2]).items()})
        return cls({((), (g,)): Q(1)})

    @classmethod
    def scalar(cls, c):
        return cls({((), ()): _coerce_q(c)})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return HopfElement(out)

    def __neg__(self):
        return HopfElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, HopfElement):
            c = _coerce_q(other)
            return HopfElement({w: v * c for w, v in self.terms.items()})
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                for w, c in _mul_basis(w1, w2).items():
                    s = out.get(w, 0) + c1 * c2 * c
                    if s:
                        out[w] = s
                    else:
                        out.pop(w, None)
        return HopfElement(out)

    def __rmul__(self, c):
        return self * c

    def __eq__(self, other):
        if not isinstance(other, HopfElement):
            other = HopfElement.scalar(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def weights(self):
        return {word_weight(w) for w in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=_word_sort_key):
            c = self.terms[w]
            body = fmt_word(w)
            if body == "1":
                parts.append(_fmt_c(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{_fmt_c(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _fmt_c(c):
    c = _coerce_q(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _word_sort_key(w):
    F, U = w
    return (word_weight(w), len(F) + len(U), [repr(g) for g in F], [repr(_ukey(g)) for g in U])


def fmt_gen(g):
    if g[0] == "X":
        return f"X_{g[1]}"
    if g[0] == "Y":
        return f"Y_{g[1]}^{g[2]}"
    return f"δ^{g[1]}_{{{''.join(map(str, g[2]))}}}"


def fmt_word(w):
    F, U = w
    gens = list(F) + list(U)
    return "*".join(fmt_gen(g) for g in gens) if gens else "1"


def one():
    return HopfElement.scalar(1)


def normal_form(word):
    """Normal form of an arbitrary product of generators (a list)."""
    out = one()
    for g in word:
        out = out * HopfElement.gen(g)
    return out


def bracket(h1: HopfElement, h2: HopfElement) -> HopfElement:
    """Algebraic commutator [h1, h2] in normal form."""
    return h1 * h2 - h2 * h1


def is_Q_word(w):
    return not any(g[0] == "Y" for g in w[1])


def h_words(n, weight, max_len, allow_y=True):
    """All normal-form words of a given weight and at most max_len generators."""
    deltas = []
    for order in range(1, weight + 1):
        for i in range(1, n + 1):
            for L in itertools.combinations_with_replacement(range(1, n + 1), order + 1):
                deltas.append(("D", i, L))
    xs = [("X", k) for k in range(1, n + 1)]
    ys = [("Y", a, b) for a in range(1, n + 1) for b in range(1, n + 1)] if allow_y else []
    out = []
    for nf in range(0, max_len + 1):
        for F in itertools.combinations_with_replacement(deltas, nf):
            wF = sum(gen_weight(g) for g in F)
            if wF > weight:
                continue
            nx = weight - wF
            if nf + nx > max_len:
                continue
            for Xs in itertools.combinations_with_replacement(xs, nx):
                for ny in range(0, max_len - nf - nx + 1):
                    for Ys in itertools.combinations_with_replacement(ys, ny):
                        out.append((tuple(sorted(F)), tuple(sorted(Xs + Ys, key=_ukey))))
    return out


# ------------------------------------------------------------ tensors

class TensorElement:
    """Rational combination of tuples of normal-form words (H^{(x) q})."""

    __slots__ = ("terms", "q")

    def __init__(self, terms=None, q=None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        if q is None:
            q = len(next(iter(self.terms))) if self.terms else 0
        self.q = q

    @classmethod
    def from_legs(cls, *legs):
        """Tensor product of HopfElements."""
        acc = {(): Q(1)}
        for h in legs:
            nxt = {}
            for k, c in acc.items():
                for w, c2 in h.terms.items():
                    nk = k + (w,)
                    nxt[nk] = nxt.get(nk, 0) + c * c2
            acc = nxt
        return cls(acc, len(legs))

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TensorElement(out, self.q if self.terms else other.q)

    def __neg__(self):
        return TensorElement({k: -c for k, c in self.terms.items()}, self.q)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _coerce_q(c)
        return TensorElement({k: v * c for k, v in self.terms.items()}, self.q)

    def __mul__(self, other):
        """Leg-wise product."""
        if not isinstance(other, TensorElement):
            return self.scale(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                acc = {(): c1 * c2}
                for w1, w2 in zip(k1, k2):
                    prod = _mul_basis(w1, w2)
                    nxt = {}
                    for kk, cc in acc.items():
                        for w, c in prod.items():
                            nk = kk + (w,)
                            nxt[nk] = nxt.get(nk, 0) + cc * c
                    acc = nxt
                for kk, cc in acc.items():
                    s = out.get(kk, 0) + cc
                    if s:
                        out[kk] = s
                    else:
                        out.pop(kk, None)
        return TensorElement(out, self.q)

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leg(self, idx):
        """Only meaningful for pure tensors; used in tests."""
        raise NotImplementedError

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: [_word_sort_key(w) for w in k]):
            c = self.terms[k]
            body = " ⊗ ".join(fmt_word(w) for w in k)
            parts.append(body if c == 1 else f"{_fmt_c(c)}*({body})")
        return " + ".join(parts)

    __repr__ = __str__


def _tensor_of_gen(g1, g2, c=1):
    return TensorElement({(g1, g2): _coerce_q(c)}, 2)


E_WORD = ((), ())


# ------------------------------------------------------------ coproduct

@lru_cache(maxsize=None)
def _coproduct_gen(g):
    n = _DIM[0]
    if g[0] == "Y":
        w = ((), (g,))
        return TensorElement({(w, E_WORD): Q(1), (E_WORD, w): Q(1)}, 2)
    if g[0] == "X":
        k = g[1]
        w = ((), (g,))
        terms = {(w, E_WORD): Q(1), (E_WORD, w): Q(1)}
        out = TensorElement(terms, 2)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                dl = HopfElement.gen(("D", i, (j, k)))
                yy = HopfElement.gen(("Y", i, j))
                out = out + TensorElement.from_legs(dl, yy)
        return out
    _, i, L = g
    if len(L) == 2:
        w = ((g,), ())
        return TensorElement({(w, E_WORD): Q(1), (E_WORD, w): Q(1)}, 2)
    # canonical L sorted: delta^i_L = [X_m, delta^i_{L[:-1]}], m = max
    m = L[-1]
    base = ("D", i, L[:-1])
    dx = _coproduct_gen(("X", m))
    db = _coproduct_gen(base)
    return dx * db - db * dx


def _coproduct_word(w):
    F, U = w
    acc = TensorElement({(E_WORD, E_WORD): Q(1)}, 2)
    for g in F + U:
        acc = acc * _coproduct_gen(g)
    return acc


def coproduct(h: HopfElement) -> TensorElement:
    out = TensorElement({}, 2)
    for w, c in h.terms.items():
        out = out + _coproduct_word(w).scale(c)
    return out


def iterated_coproduct(h: HopfElement, q: int) -> TensorElement:
    """Delta^{(q-1)}: H -> H^{(x) q} (q = 1 gives h itself)."""
    cur = TensorElement({(w,): c for w, c in h.terms.items()}, 1)
    for _ in range(q - 1):
        nxt = TensorElement({}, cur.q + 1)
        for k, c in cur.terms.items():
            dl = _coproduct_word(k[-1])
            nxt = nxt + TensorElement({k[:-1] + kk: c * cc for kk, cc in dl.terms.items()},
                                      cur.q + 1)
        cur = nxt
    return cur


def counit(h: HopfElement):
    return h.terms.get(E_WORD, Q(0))


def _delta_word(w):
    F, U = w
    if F:
        return Q(0)
    v = Q(1)
    for g in U:
        if g[0] != "Y" or g[1] != g[2]:
            return Q(0)
    return v


def delta_char(h: HopfElement):
    """The modular character: delta(Y(i,j)) = [i = j], zero on X and deltas."""
    return sum((c * _delta_word(w) for w, c in h.terms.items()), Q(0))


@lru_cache(maxsize=None)
def _antipode_gen(g):
    """S(g) = - sum_{terms other than g (x) 1} S(h1) h2."""
    gw = ((g,), ()) if g[0] == "D" else ((), (g,))
    dl = _coproduct_gen(g)
    out = HopfElement({})
    for (w1, w2), c in dl.terms.items():
        if w2 == E_WORD and w1 == gw:
            if c != 1:
                raise AssertionError("coproduct must contain g (x) 1 with coefficient 1")
            continue
        out = out - _antipode_word(w1) * HopfElement.word(w2) * c
    return out


def _antipode_word(w):
    F, U = w
    gens = list(F) + list(U)
    out = one()
    for g in gens:
        out = _antipode_gen(g) * out
    return out


def antipode(h: HopfElement) -> HopfElement:
    out = HopfElement({})
    for w, c in h.terms.items():
        out = out + _antipode_word(w) * c
    return out


def s_delta(h: HopfElement) -> HopfElement:
    """S_delta(h) = sum delta(h1) S(h2)."""
    out = HopfElement({})
    for w, c in h.terms.items():
        for (w1, w2), c2 in _coproduct_word(w).terms.items():
            dv = _delta_word(w1)
            if dv:
                out = out + _antipode_word(w2) * (c * c2 * dv)
    return out
