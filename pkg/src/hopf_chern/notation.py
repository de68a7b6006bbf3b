"""Readable text and LaTeX renderings of polynomials, forms and Hopf tensors.

Text output is what the JSON reports carry; LaTeX is presentation only."""

from __future__ import annotations

import re

from .exact import LocalizedPoly, Poly, _mono_deg, _rank, registered, var_name
from .forms import BiForm, _var_of_gen

__all__ = ["poly_text", "loc_text", "form_text", "poly_latex", "loc_latex", "form_latex",
           "tensor_text", "tensor_latex", "word_latex", "q_text"]


def q_text(c):
    c = LocalizedPoly.const(c).num.const_value() if not hasattr(c, "numerator") else c
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def _ascending(p: Poly):
    def key(item):
        m = item[0]
        return (_mono_deg(m), [(_rank(var_name(v)), e) for v, e in m])
    return sorted(p.terms.items(), key=key)


def _join(parts):
    out = ""
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def _poly(p: Poly, name_fn, mul, pow_fn):
    parts = []
    for m, c in _ascending(p):
        neg = c < 0
        a = -c if neg else c
        names = [name_fn(var_name(v)) if e == 1 else pow_fn(name_fn(var_name(v)), e)
                 for v, e in m]
        coef = q_text(a)
        if names:
            body = mul.join(names) if coef == "1" else mul.join([coef] + names)
        else:
            body = coef
        parts.append((neg, body))
    return _join(parts)


def poly_text(p: Poly):
    return _poly(p, lambda s: s, "*", lambda s, e: f"{s}^{e}")


def _needs_parens(p: Poly):
    return len(p.terms) > 1


def loc_text(f: LocalizedPoly):
    f = f.simplify()
    num = poly_text(f.num)
    if not f.den:
        return num
    dens = []
    for rid, e in f.den:
        d = registered(rid)
        s = poly_text(d)
        s = f"({s})" if _needs_parens(d) else s
        dens.append(s if e == 1 else f"{s}^{e}")
    den = "*".join(dens)
    if len(dens) > 1:
        den = f"({den})"
    if _needs_parens(f.num):
        num = f"({num})"
    return f"{num}/{den}"


def _form(a: BiForm, coef_fn, gen_fn, wedge):
    if a.is_zero():
        return "0"
    parts = []
    for g in sorted(a.terms, key=lambda g: (len(g), g)):
        c = a.terms[g]
        cs = coef_fn(c)
        gs = wedge.join(gen_fn(x) for x in g)
        if not gs:
            parts.append(cs)
        elif cs == "1":
            parts.append(gs)
        elif cs == "-1":
            parts.append("-" + gs)
        else:
            single = len(c.num.terms) == 1
            parts.append(f"{cs} {gs}" if single else f"({cs}) {gs}")
    return " + ".join(parts).replace("+ -", "- ")


def form_text(a: BiForm):
    return _form(a, loc_text, lambda g: "d" + _var_of_gen(g), "^")


# ------------------------------------------------------------------ LaTeX

def _latex_name(name):
    m = re.match(r"^([xt])(\d+)$", name)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    m = re.match(r"^y(\d+)_(\d+)$", name)
    if m:
        return f"y^{{{m.group(1)}}}_{{{m.group(2)}}}"
    m = re.match(r"^g(\d+)_(\d+)((?:_\d+)+)$", name)
    if m:
        lower = "".join(m.group(3).split("_"))
        return f"\\gamma^{{{m.group(2)}}}_{{{lower}}}(\\phi_{{{m.group(1)}}})"
    return name


def poly_latex(p: Poly):
    return _poly(p, _latex_name, " ", lambda s, e: f"{{{s}}}^{{{e}}}")


def loc_latex(f: LocalizedPoly):
    f = f.simplify()
    num = poly_latex(f.num)
    if not f.den:
        return num
    dens = []
    for rid, e in f.den:
        d = registered(rid)
        s = poly_latex(d)
        if e > 1:
            s = f"\\left({s}\\right)^{{{e}}}" if _needs_parens(d) else f"{{{s}}}^{{{e}}}"
        elif len(f.den) > 1 and _needs_parens(d):
            s = f"\\left({s}\\right)"
        dens.append(s)
    neg = num.startswith("-") and len(f.num.terms) == 1
    body = f"\\frac{{{num[1:] if neg else num}}}{{{' '.join(dens)}}}"
    return "-" + body if neg else body


def form_latex(a: BiForm):
    def gen(g):
        v = _var_of_gen(g)
        return "d" + _latex_name(v)
    return _form(a, loc_latex, gen, " \\wedge ")


def _gen_text(g):
    if g[0] == "X":
        return f"X_{g[1]}"
    if g[0] == "Y":
        return f"Y_{g[1]}^{g[2]}"
    return f"δ^{g[1]}_{{{''.join(map(str, g[2]))}}}"


def _gen_latex(g):
    if g[0] == "X":
        return f"X_{{{g[1]}}}"
    if g[0] == "Y":
        return f"Y_{{{g[1]}}}^{{{g[2]}}}"
    return f"\\delta^{{{g[1]}}}_{{{''.join(map(str, g[2]))}}}"


def word_latex(w):
    gens = list(w[0]) + list(w[1])
    return " ".join(_gen_latex(g) for g in gens) if gens else "1"


def _word_text(w):
    gens = list(w[0]) + list(w[1])
    return "*".join(_gen_text(g) for g in gens) if gens else "1"


def _tensor(t, word_fn, otimes, mul):
    if t.is_zero():
        return "0"
    parts = []
    for k in sorted(t.terms, key=lambda k: [_word_text(w) for w in k]):
        c = t.terms[k]
        neg = c < 0
        a = -c if neg else c
        body = otimes.join(word_fn(w) for w in k) or "1"
        coef = q_text(a)
        parts.append((neg, body if coef == "1" else f"{coef}{mul}{body}"))
    return _join(parts)


def tensor_text(t):
    return _tensor(t, _word_text, " ⊗ ", "*")


def tensor_latex(t):
    out = _tensor(t, word_latex, " \\otimes ", " ")
    return re.sub(r"(\d+)/(\d+) ", r"\\tfrac{\1}{\2} ", out)
