"""Exterior forms on Delta^p x R^n (optionally x GL_n) with exact coefficients.

Generators are encoded as integers and kept sorted inside each term:
``dt_r -> r``, ``dx_i -> 100 + i``, ``dy{i}_{j} -> 1000 + 10 i + j``.
Hence every term is ``coef * dt^I ^ dx^J ^ dy^K`` with I, J, K increasing.
t_0 never appears: it is eliminated as ``1 - t_1 - ... - t_p``.
"""

from __future__ import annotations

import math
import re

from .exact import LocalizedPoly, Poly, Q, var_name

__all__ = ["BiForm", "wedge", "d", "pullback", "fiber_integrate", "face_map",
           "degeneracy_map", "t0", "simplex_integral"]

_VAR_RE = re.compile(r"^(t|x)(\d+)$|^y(\d+)_(\d+)$")


def _gen_of_var(name):
    m = _VAR_RE.match(name)
    if not m:
        return None
    if m.group(1) == "t":
        return int(m.group(2))
    if m.group(1) == "x":
        return 100 + int(m.group(2))
    return 1000 + 10 * int(m.group(3)) + int(m.group(4))


def _var_of_gen(g):
    if g < 100:
        return f"t{g}"
    if g < 1000:
        return f"x{g - 100}"
    return f"y{(g - 1000) // 10}_{g % 10}"


def _gen_label(g):
    return "d" + _var_of_gen(g)


def _merge(a, b):
    """Sorted concatenation of generator tuples with sign; None if repeated."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    sa = set(a)
    if any(g in sa for g in b):
        return None, 0
    sign = 1
    # count inversions: pairs (x in a, y in b) with x > y
    inv = 0
    for y in b:
        for x in a:
            if x > y:
                inv += 1
    if inv & 1:
        sign = -1
    return tuple(sorted(a + b)), sign


class BiForm:
    """Immutable-by-convention sum of ``coef * generators``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def zero(cls):
        return cls({})

    @classmethod
    def scalar(cls, f):
        f = LocalizedPoly.coerce(f)
        return cls({(): f}) if not f.is_zero() else cls({})

    @classmethod
    def dt(cls, r):
        return cls({(r,): LocalizedPoly.const(1)})

    @classmethod
    def dx(cls, i):
        return cls({(100 + i,): LocalizedPoly.const(1)})

    @classmethod
    def dy(cls, i, j):
        return cls({(1000 + 10 * i + j,): LocalizedPoly.const(1)})

    @classmethod
    def dvar(cls, name):
        g = _gen_of_var(name)
        if g is None:
            return cls({})
        return cls({(g,): LocalizedPoly.const(1)})

    def is_zero(self):
        return all(c.is_zero() for c in self.terms.values())

    def __add__(self, other):
        if not isinstance(other, BiForm):
            other = BiForm.scalar(other)
        d = dict(self.terms)
        for g, c in other.terms.items():
            s = d.get(g)
            s = c if s is None else s + c
            if s.is_zero():
                d.pop(g, None)
            else:
                d[g] = s
        return BiForm(d)

    __radd__ = __add__

    def __neg__(self):
        return BiForm({g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Multiplication by a scalar function (0-form coefficient)."""
        if isinstance(f, BiForm):
            return wedge(self, f)
        f = LocalizedPoly.coerce(f) if isinstance(f, (LocalizedPoly, Poly)) else f
        out = {}
        for g, c in self.terms.items():
            v = c * f
            if not v.is_zero():
                out[g] = v
        return BiForm(out)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        return (self - other).is_zero()

    def degree_parts(self):
        """Set of (dt-degree, dx-degree, dy-degree) present."""
        out = set()
        for g in self.terms:
            out.add((sum(1 for x in g if x < 100), sum(1 for x in g if 100 <= x < 1000),
                     sum(1 for x in g if x >= 1000)))
        return out

    def total_degrees(self):
        return {len(g) for g in self.terms}

    def component(self, dt_deg=None, dx_deg=None, dy_deg=None):
        out = {}
        for g, c in self.terms.items():
            a = sum(1 for x in g if x < 100)
            b = sum(1 for x in g if 100 <= x < 1000)
            e = len(g) - a - b
            if (dt_deg is None or a == dt_deg) and (dx_deg is None or b == dx_deg) \
                    and (dy_deg is None or e == dy_deg):
                out[g] = c
        return BiForm(out)

    def coefficient(self, gens):
        return self.terms.get(tuple(gens), LocalizedPoly.const(0))

    def map_coeffs(self, fn):
        out = {}
        for g, c in self.terms.items():
            v = fn(c)
            if not v.is_zero():
                out[g] = v
        return BiForm(out)

    def simplify(self):
        return self.map_coeffs(lambda c: c.simplify())

    def evaluate(self, point):
        """Coefficient values at a point: {generators: rational}."""
        out = {}
        for g, c in self.terms.items():
            v = c.evaluate(point)
            if v:
                out[g] = v
        return out

    def variables(self):
        out = set()
        for c in self.terms.values():
            out |= c.variables()
        return out

    def generators(self):
        return {x for g in self.terms for x in g}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for g in sorted(self.terms, key=lambda g: (len(g), g)):
            c = self.terms[g]
            gs = "^".join(_gen_label(x) for x in g)
            parts.append(f"{c}" + (f" {gs}" if gs else ""))
        return " + ".join(parts)

    __repr__ = __str__


def wedge(a: BiForm, b: BiForm) -> BiForm:
    out = {}
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            g, s = _merge(ga, gb)
            if g is None:
                continue
            v = ca * cb
            if s < 0:
                v = -v
            prev = out.get(g)
            out[g] = v if prev is None else prev + v
    return BiForm({g: c for g, c in out.items() if not c.is_zero()})


def _coef_differential(c: LocalizedPoly):
    """d of a scalar coefficient: {generator: partial derivative}."""
    out = {}
    for name in c.variables():
        g = _gen_of_var(name)
        if g is None:
            continue
        dc = c.diff(name)
        if not dc.is_zero():
            out[g] = dc
    return out


def d(a: BiForm) -> BiForm:
    """Total de Rham differential (t, x and y directions)."""
    out = {}
    for gens, c in a.terms.items():
        for g, dc in _coef_differential(c).items():
            if g in gens:
                continue
            pos = sum(1 for x in gens if x < g)
            ng = tuple(sorted(gens + (g,)))
            v = dc if pos % 2 == 0 else -dc
            prev = out.get(ng)
            out[ng] = v if prev is None else prev + v
    return BiForm({g: c for g, c in out.items() if not c.is_zero()})


def substitute(a: BiForm, images: dict) -> BiForm:
    """Pull back along the map given by coordinate images
    (variable name -> LocalizedPoly); d(var) -> d(image)."""
    dimg = {}
    for name, img in images.items():
        g = _gen_of_var(name)
        if g is not None:
            dimg[g] = d(BiForm.scalar(img))
    out = BiForm.zero()
    for gens, c in a.terms.items():
        coef = c.substitute(images) if images else c
        if coef.is_zero():
            continue
        piece = BiForm.scalar(coef)
        for g in gens:
            piece = wedge(piece, dimg[g] if g in dimg else BiForm({(g,): LocalizedPoly.const(1)}))
        out = out + piece
    return out


def pullback(a: BiForm, phi, frame=None) -> BiForm:
    """phi^* a for a diffeomorphism acting on the R^n factor.  When the form
    involves frame variables (or ``frame=True``) the prolongation
    y -> phi'(x) y is substituted as well."""
    from .jets import prolong
    imgs = prolong(phi)
    has_y = frame if frame is not None else any(
        v.startswith("y") for v in a.variables()) or any(g >= 1000 for g in a.generators())
    if not has_y:
        imgs = {k: v for k, v in imgs.items() if k.startswith("x")}
    return substitute(a, imgs)


def t0(p):
    out = LocalizedPoly.const(1)
    for r in range(1, p + 1):
        out = out - LocalizedPoly.var(f"t{r}")
    return out


def simplex_integral(exps, p):
    """Integral of prod t_r^{a_r} over {t >= 0, sum t <= 1} in R^p:
    prod a_r! / (|a| + p)!"""
    num = 1
    for a in exps:
        num *= math.factorial(a)
    return Q(num, math.factorial(sum(exps) + p))


def _integrate_poly(c: LocalizedPoly, p):
    tnames = [f"t{r}" for r in range(1, p + 1)]
    for rid, _ in c.den:
        from .exact import registered
        if any(v.startswith("t") for v in registered(rid).variables()):
            raise ValueError("denominator depends on simplex coordinates")
    acc = {}
    from .exact import _index  # variable table
    tidx = {_index[t]: r for r, t in enumerate(tnames) if t in _index}
    for m, coef in c.num.terms.items():
        exps = [0] * p
        rest = []
        for v, e in m:
            r = tidx.get(v)
            if r is None:
                rest.append((v, e))
            else:
                exps[r] = e
        key = tuple(rest)
        acc[key] = acc.get(key, 0) + coef * simplex_integral(exps, p)
    return LocalizedPoly(Poly({k: v for k, v in acc.items() if v}), c.den)


def fiber_integrate(p: int, a: BiForm) -> BiForm:
    """Integrate the dt_1^...^dt_p component over the standard p-simplex.

    Orientation: dt_1 ^ ... ^ dt_p (t_0 eliminated), dt's placed first."""
    top = tuple(range(1, p + 1))
    out = {}
    for gens, c in a.terms.items():
        if tuple(x for x in gens if x < 100) != top:
            continue
        rest = gens[p:]
        v = _integrate_poly(c, p)
        if not v.is_zero():
            prev = out.get(rest)
            out[rest] = v if prev is None else prev + v
    return BiForm({g: c for g, c in out.items() if not c.is_zero()})


def face_map(i: int, p: int):
    """Images of t_1..t_p under the i-th coface Delta^{p-1} -> Delta^p
    (inserting a zero barycentric coordinate at slot i)."""
    s = [None] + [LocalizedPoly.var(f"t{r}") for r in range(1, p)]
    imgs = {}
    if i == 0:
        imgs["t1"] = t0(p - 1)
        for j in range(2, p + 1):
            imgs[f"t{j}"] = s[j - 1]
    else:
        for j in range(1, p + 1):
            if j < i:
                imgs[f"t{j}"] = s[j]
            elif j == i:
                imgs[f"t{j}"] = LocalizedPoly.const(0)
            else:
                imgs[f"t{j}"] = s[j - 1]
    return imgs


def degeneracy_map(i: int, p: int):
    """Images of t_1..t_p under the i-th codegeneracy Delta^{p+1} -> Delta^p
    (merging barycentric slots i and i+1)."""
    s = [LocalizedPoly.var(f"t{r}") for r in range(0, p + 2)]
    imgs = {}
    for j in range(1, p + 1):
        if i == 0:
            imgs[f"t{j}"] = s[j + 1]
        elif j < i:
            imgs[f"t{j}"] = s[j]
        elif j == i:
            imgs[f"t{j}"] = s[j] + s[j + 1]
        else:
            imgs[f"t{j}"] = s[j + 1]
    return imgs
