"""Exact multivariate polynomials and their localizations.

Coefficients are rationals (gmpy2.mpq when available, else Fraction).
A ``LocalizedPoly`` is ``num / prod(D_i ** e_i)`` where every ``D_i`` is a
*registered* nonzero polynomial; no multivariate gcd is ever required.
Zero testing is exact: a localized value is zero iff its numerator is.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    def Q(num, den=1):
        if isinstance(num, str):
            return _mpq(Fraction(num)) if den == 1 else _mpq(Fraction(num)) / den
        return _mpq(num, den)

    QTYPE = type(_mpq(0))
except ImportError:  # pragma: no cover
    def Q(num, den=1):
        return Fraction(num, den) if not isinstance(num, str) else Fraction(num) / den

    QTYPE = Fraction

__all__ = [
    "Q", "Poly", "LocalizedPoly", "SingularPointError", "NotInvertibleError",
    "var", "const", "register", "registered", "parse", "var_name", "sort_key",
]


class SingularPointError(ZeroDivisionError):
    """A registered denominator vanishes at the evaluation point."""


class NotInvertibleError(ValueError):
    pass


# ---------------------------------------------------------------- variables

_lock = threading.Lock()
_names: list[str] = []
_index: dict[str, int] = {}

_CATEGORY = {"t": 0, "x": 1, "y": 2, "J": 3}


def _rank(name):
    m = re.match(r"([A-Za-z_]+)", name)
    head = m.group(1) if m else name
    cat = _CATEGORY.get(head[0], 4) if head in ("t", "x", "y", "J") else 4
    nums = tuple(int(s) for s in re.findall(r"\d+", name))
    return (cat, head, nums, name)


def sort_key(name):
    """Global variable order: t, x, y, jet symbols, then anything else."""
    return _rank(name)


def _intern(name: str) -> int:
    i = _index.get(name)
    if i is None:
        with _lock:
            i = _index.get(name)
            if i is None:
                i = len(_names)
                _names.append(name)
                _index[name] = i
    return i


def var_name(i: int) -> str:
    return _names[i]


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a, b):
    """a / b if b divides a, else None."""
    da = dict(a)
    for v, e in b:
        if da.get(v, 0) < e:
            return None
        da[v] -= e
    return tuple(sorted((v, e) for v, e in da.items() if e))


def _mono_deg(m):
    return sum(e for _, e in m)


# --------------------------------------------------------------------- Poly

class Poly:
    """Sparse polynomial: ``{monomial: coeff}`` with monomial a sorted tuple
    of ``(variable index, exponent)``.  Immutable by convention."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}
        self._hash = None

    @staticmethod
    def _clean(d):
        return Poly({m: c for m, c in d.items() if c})

    # construction
    @classmethod
    def const(cls, c):
        c = Q(c) if not isinstance(c, QTYPE) else c
        return cls({(): c}) if c else cls({})

    @classmethod
    def var(cls, name, power=1):
        return cls({((_intern(name), power),): Q(1)})

    # predicates
    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        return self.terms.get((), Q(0))

    def variables(self):
        return {var_name(v) for m in self.terms for v, _ in m}

    def degree(self):
        return max((_mono_deg(m) for m in self.terms), default=0)

    def degree_in(self, name):
        i = _index.get(name)
        if i is None:
            return 0
        return max((e for m in self.terms for v, e in m if v == i), default=0)

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        d = dict(a)
        for m, c in b.items():
            s = d.get(m)
            if s is None:
                d[m] = c
            else:
                s = s + c
                if s:
                    d[m] = s
                else:
                    del d[m]
        return Poly(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return Poly({})
        return Poly({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(Q(other) if not isinstance(other, QTYPE) else other)
        if not self.terms or not other.terms:
            return Poly({})
        if len(other.terms) == 1 and () in other.terms:
            return self.scale(other.terms[()])
        if len(self.terms) == 1 and () in self.terms:
            return other.scale(self.terms[()])
        d = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                s = d.get(m)
                d[m] = ca * cb if s is None else s + ca * cb
        return Poly._clean(d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise NotInvertibleError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def key(self):
        return frozenset(self.terms.items())

    def diff(self, name):
        i = _index.get(name)
        if i is None:
            return Poly({})
        d = {}
        for m, c in self.terms.items():
            for k, (v, e) in enumerate(m):
                if v == i:
                    nm = m[:k] + (((v, e - 1),) if e > 1 else ()) + m[k + 1:]
                    d[nm] = d.get(nm, 0) + c * e
                    break
        return Poly._clean(d)

    def evaluate(self, point: dict):
        """Exact value; ``point`` maps names to rationals.  Unassigned
        variables raise KeyError."""
        cache = {}
        total = Q(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                key = (v, e)
                p = cache.get(key)
                if p is None:
                    p = Q(point[_names[v]]) ** e
                    cache[key] = p
                val = val * p
            total += val
        return total

    def substitute(self, images: dict):
        """Simultaneous substitution of variables by Polys (names -> Poly)."""
        idx = {_intern(k): v for k, v in images.items()}
        powcache = {}
        out = Poly({})
        acc = {}
        for m, c in self.terms.items():
            rest = []
            factor = None
            for v, e in m:
                img = idx.get(v)
                if img is None:
                    rest.append((v, e))
                    continue
                p = powcache.get((v, e))
                if p is None:
                    p = img ** e
                    powcache[(v, e)] = p
                factor = p if factor is None else factor * p
            base = Poly({tuple(rest): c})
            term = base if factor is None else base * factor
            for mm, cc in term.terms.items():
                acc[mm] = acc.get(mm, 0) + cc
        out = Poly._clean(acc)
        return out

    def _dense_key(self, m):
        exps = dict(m)
        n = len(_names)
        return (_mono_deg(m),) + tuple(exps.get(i, 0) for i in range(n))

    def leading(self):
        m = max(self.terms, key=self._dense_key)
        return m, self.terms[m]

    def divide_exact(self, other: "Poly"):
        """Quotient if ``other`` divides ``self`` exactly, else ``None``.

        Single-divisor division in graded-lex order: remainder zero iff
        divisible."""
        if other.is_zero():
            raise ZeroDivisionError
        if self.is_zero():
            return Poly({})
        lm, lc = other.leading()
        rem = self
        quot = {}
        steps = 0
        while not rem.is_zero():
            m, c = rem.leading()
            qm = _mono_div(m, lm)
            if qm is None:
                return None
            qc = c / lc
            quot[qm] = quot.get(qm, 0) + qc
            rem = rem - Poly({qm: qc}) * other
            steps += 1
        return Poly._clean(quot)

    # printing
    def sorted_terms(self):
        def k(item):
            m = item[0]
            return (-_mono_deg(m), [(_rank(var_name(v)), -e) for v, e in m])
        return sorted(self.terms.items(), key=k)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [_fmt_q(c)]
            for v, e in sorted(m, key=lambda ve: _rank(var_name(ve[0]))):
                nm = var_name(v)
                factors.append(nm if e == 1 else f"{nm}^{e}")
            parts.append("(" + "*".join(factors) + ")")
        return parts[0] if len(parts) == 1 else "(" + " + ".join(parts) + ")"

    __repr__ = __str__


def _fmt_q(c):
    c = Fraction(int(c.numerator), int(c.denominator))
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# ------------------------------------------------------------ registration

_reg_polys: list[Poly] = []
_reg_index: dict = {}
_pow_cache: dict = {}


def register(p: Poly) -> int:
    """Register a nonzero polynomial as an allowed denominator; returns id.
    Registration is idempotent (same polynomial, same id) and normalizes
    the sign/scale so that ``p`` and ``c*p`` share the registered factor
    only when literally equal."""
    if p.is_zero():
        raise NotInvertibleError("cannot register the zero polynomial")
    k = p.key()
    rid = _reg_index.get(k)
    if rid is None:
        with _lock:
            rid = _reg_index.get(k)
            if rid is None:
                rid = len(_reg_polys)
                _reg_polys.append(p)
                _reg_index[k] = rid
    return rid


def registered(rid: int) -> Poly:
    return _reg_polys[rid]


def _reg_pow(rid, e):
    key = (rid, e)
    p = _pow_cache.get(key)
    if p is None:
        p = _reg_polys[rid] ** e
        _pow_cache[key] = p
    return p


# ------------------------------------------------------------ LocalizedPoly

class LocalizedPoly:
    """``num / prod(registered[id] ** e)``.

    ``den`` is a sorted tuple of ``(id, exponent)`` with positive exponents.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den=()):
        self.num = num
        self.den = den if num.terms else ()

    @classmethod
    def const(cls, c):
        return cls(Poly.const(c))

    @classmethod
    def var(cls, name):
        return cls(Poly.var(name))

    @classmethod
    def coerce(cls, obj):
        if isinstance(obj, LocalizedPoly):
            return obj
        if isinstance(obj, Poly):
            return cls(obj)
        return cls.const(obj)

    @classmethod
    def inverse_of(cls, p: Poly):
        """1/p, registering ``p``."""
        if p.is_const():
            c = p.const_value()
            if not c:
                raise NotInvertibleError("division by zero")
            return cls.const(1 / c)
        return cls(Poly.const(1), ((register(p), 1),))

    def is_zero(self):
        return not self.num.terms

    def is_poly(self):
        return not self.den

    # -- helpers
    def _lift(self, den):
        """Rewrite numerator over a larger denominator ``den`` (dict)."""
        mine = dict(self.den)
        num = self.num
        for rid, e in den.items():
            extra = e - mine.get(rid, 0)
            if extra:
                num = num * _reg_pow(rid, extra)
        return num

    def __add__(self, other):
        other = LocalizedPoly.coerce(other)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return LocalizedPoly(self.num + other.num, self.den)
        den = dict(self.den)
        for rid, e in other.den:
            if den.get(rid, 0) < e:
                den[rid] = e
        num = self._lift(den) + other._lift(den)
        return LocalizedPoly(num, tuple(sorted(den.items())))

    __radd__ = __add__

    def __neg__(self):
        return LocalizedPoly(-self.num, self.den)

    def __sub__(self, other):
        return self + (-LocalizedPoly.coerce(other))

    def __rsub__(self, other):
        return LocalizedPoly.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (LocalizedPoly, Poly)):
            c = Q(other) if not isinstance(other, QTYPE) else other
            return LocalizedPoly(self.num.scale(c), self.den)
        other = LocalizedPoly.coerce(other)
        if not self.den:
            den = other.den
        elif not other.den:
            den = self.den
        else:
            d = dict(self.den)
            for rid, e in other.den:
                d[rid] = d.get(rid, 0) + e
            den = tuple(sorted(d.items()))
        return LocalizedPoly(self.num * other.num, den)

    __rmul__ = __mul__

    def inv(self):
        """Multiplicative inverse; registers the numerator."""
        if self.is_zero():
            raise NotInvertibleError("division by zero")
        out = LocalizedPoly.inverse_of(self.num)
        for rid, e in self.den:
            out = out * LocalizedPoly(_reg_pow(rid, e))
        return out

    def __truediv__(self, other):
        if not isinstance(other, (LocalizedPoly, Poly)):
            return self * (1 / Q(other))
        return self * LocalizedPoly.coerce(other).inv()

    def __pow__(self, k):
        if k >= 0:
            den = tuple((rid, e * k) for rid, e in self.den) if k else ()
            return LocalizedPoly(self.num ** k, den)
        if self.num.is_const():
            return self.inv() ** (-k)
        rid = _reg_index.get(self.num.key())
        if rid is None:
            raise NotInvertibleError(
                "negative power of a non-registered polynomial")
        return self.inv() ** (-k)

    def __eq__(self, other):
        try:
            other = LocalizedPoly.coerce(other)
        except Exception:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("LocalizedPoly is not hashable (equality is by cross-multiplication)")

    def diff(self, name):
        dn = self.num.diff(name)
        if not self.den:
            return LocalizedPoly(dn)
        # (N / prod D_i^e_i)' = (N' prod D_i - N sum e_i D_i' prod_{j!=i} D_j)
        #                       / prod D_i^(e_i+1)
        ds = [(rid, e, _reg_polys[rid]) for rid, e in self.den]
        prod_all = Poly.const(1)
        for _, _, D in ds:
            prod_all = prod_all * D
        num = dn * prod_all
        for k, (rid, e, D) in enumerate(ds):
            dD = D.diff(name)
            if dD.is_zero():
                continue
            others = Poly.const(e)
            for j, (_, _, Dj) in enumerate(ds):
                if j != k:
                    others = others * Dj
            num = num - self.num * dD * others
        den = tuple((rid, e + 1) for rid, e, _ in ds)
        return LocalizedPoly(num, den).simplify_cheap()

    def simplify_cheap(self):
        """Drop denominator factors whose variables do not move (no-op hook)."""
        return self

    def simplify(self):
        """Cancel registered factors that divide the numerator exactly."""
        num = self.num
        den = dict(self.den)
        for rid in list(den):
            D = _reg_polys[rid]
            while den.get(rid):
                q = num.divide_exact(D)
                if q is None:
                    break
                num = q
                den[rid] -= 1
                if not den[rid]:
                    del den[rid]
        return LocalizedPoly(num, tuple(sorted(den.items())))

    def variables(self):
        out = self.num.variables()
        for rid, _ in self.den:
            out |= _reg_polys[rid].variables()
        return out

    def evaluate(self, point: dict):
        val = self.num.evaluate(point)
        for rid, e in self.den:
            dv = _reg_polys[rid].evaluate(point)
            if not dv:
                raise SingularPointError(
                    f"registered denominator #{rid} = {_reg_polys[rid]} vanishes")
            val = val / dv ** e
        return val

    def substitute(self, images: dict):
        """Simultaneous substitution; images are Poly or LocalizedPoly."""
        limgs = {k: LocalizedPoly.coerce(v) for k, v in images.items()}
        if all(v.is_poly() for v in limgs.values()):
            pimgs = {k: v.num for k, v in limgs.items()}
            out = LocalizedPoly(self.num.substitute(pimgs))
            for rid, e in self.den:
                D = _reg_polys[rid].substitute(pimgs)
                out = out * (LocalizedPoly.inverse_of(D) ** e)
            return out
        out = _subst_poly_loc(self.num, limgs)
        for rid, e in self.den:
            D = _subst_poly_loc(_reg_polys[rid], limgs)
            out = out * (D.inv() ** e)
        return out

    def __str__(self):
        if not self.den:
            return str(self.num)
        ds = "*".join(f"{_paren(registered(rid))}^{e}" if e > 1 else _paren(registered(rid))
                      for rid, e in self.den)
        return f"({_paren(self.num)}/{ds if len(self.den) == 1 else '(' + ds + ')'})"

    __repr__ = __str__


def _paren(p):
    s = str(p)
    return s if s.startswith("(") else f"({s})"


def _subst_poly_loc(p: Poly, limgs):
    idx = {_intern(k): v for k, v in limgs.items()}
    out = LocalizedPoly(Poly({}))
    for m, c in p.terms.items():
        rest = []
        term = None
        for v, e in m:
            img = idx.get(v)
            if img is None:
                rest.append((v, e))
            else:
                f = img ** e
                term = f if term is None else term * f
        base = LocalizedPoly(Poly({tuple(rest): c}))
        out = out + (base if term is None else base * term)
    return out


def var(name) -> LocalizedPoly:
    return LocalizedPoly.var(name)


def const(c) -> LocalizedPoly:
    return LocalizedPoly.const(c)


# ------------------------------------------------------------------ parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*(?:\([^()]*\))?)|(\S))")


def parse(text: str) -> LocalizedPoly:
    """Parse the infix syntax produced by ``str``: integers, symbols
    (``x1``, ``t2``, ``y1_2``, ``J(0;1;11)``), ``+ - * / ^`` and parentheses.
    Division by a non-constant registers the divisor."""
    toks = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            toks.append(("num", int(num)))
        elif name:
            toks.append(("var", name))
        elif op:
            toks.append(("op", op))
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else (None, None)

    def take():
        t = toks[pos[0]]
        pos[0] += 1
        return t

    def expr():
        v = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            r = unary()
            v = v * r if op == "*" else v / r
        return v

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        return power()

    def power():
        b = atom()
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            b = b ** e
        return b

    def atom():
        kind, val = take()
        if kind == "num":
            return LocalizedPoly.const(val)
        if kind == "var":
            return LocalizedPoly.var(val)
        if val == "(":
            v = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return v
        raise ValueError(f"unexpected token {val!r}")

    out = expr()
    if pos[0] != len(toks):
        raise ValueError(f"trailing input at token {toks[pos[0]]}")
    return out
