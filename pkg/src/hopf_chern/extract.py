"""From the group cocycles C_J to Hopf cyclic tensors over Q_n.

The inhomogeneous component C_J^{(p)}(phi_1, .., phi_p) is rewritten as a
*jet template*: a form on R^n whose coefficients are polynomials in symbols
``g{a}_{i}_{j}_{k}`` standing for gamma^i_{jk}(phi_a) evaluated at the point
(phi_{a+1} o .. o phi_p)~(x, 1) of the frame bundle.  Replacing every symbol
of slot a by the multiplication operator delta^i_{jk} in leg a, and every
missing dx direction by a horizontal leg X_k, gives the Hopf tensor."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field

from .chern_weil import (SimplicialConnection, SimplicialCurvature, _check_J, chern_form,
                         closed_form_curvature, perm_sign)
from .conventions import level_sign
from .crossed import CrossedMonomial, act
from .cyclic import (RELATIVE, B_op, b_op, gl_invariance_check, in_twisted_image,
                     reduce_tensor)
from .exact import LocalizedPoly, Poly, Q, var_name
from .forms import BiForm, fiber_integrate
from .group_cochain import (GroupCochain, UnsupportedInput, _pmap, chern_group_cochain,
                            hom_to_inhom)
from .hopf import D, HopfElement, TensorElement, X, fmt_word, set_dimension
from .jets import JetDiffeo, compose, gamma_coeff, identity, random_diffeo

__all__ = ["JetTemplate", "jet_template", "symbol", "parse_symbol", "template_orders",
           "assert_jet_order", "JetOrderError", "NotExtractable", "TemplateMismatch",
           "ExtractedTensor", "extract_hopf_tensor", "extract_class", "in_X_dot",
           "PhiReport", "phi_integrand_check", "tensor_to_json", "template_value"]


class JetOrderError(AssertionError):
    pass


class NotExtractable(ValueError):
    pass


class TemplateMismatch(AssertionError):
    pass


_SYM = re.compile(r"^g(\d+)_(\d+)((?:_\d+)+)$")


def symbol(a, i, lower):
    return "g%d_%d_%s" % (a, i, "_".join(map(str, lower)))


def parse_symbol(name):
    """'g2_1_1_2' -> (2, 1, (1, 2)); None for anything else."""
    m = _SYM.match(name)
    if not m:
        return None
    lower = tuple(int(s) for s in m.group(3).split("_")[1:])
    return int(m.group(1)), int(m.group(2)), lower


@dataclass(frozen=True)
class JetTemplate:
    J: tuple
    p: int
    n: int
    form: BiForm
    validated: bool = False
    checked_tuples: int = 0

    @property
    def q(self):
        return self.p

    def symbols(self):
        return {v for v in self.form.variables() if parse_symbol(v)}

    def is_zero(self):
        return self.form.is_zero()


def _symbolic_gamma(a, n):
    """Gamma of slot a as an n x n matrix of 1-forms in the symbols."""
    M = [[BiForm.zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                M[i][j] = M[i][j] + BiForm.dx(k + 1) * LocalizedPoly.var(
                    symbol(a, i + 1, (j + 1, k + 1)))
    return M


def _matsum(mats, n):
    out = [[BiForm.zero() for _ in range(n)] for _ in range(n)]
    for M in mats:
        out = [[out[i][j] + M[i][j] for j in range(n)] for i in range(n)]
    return out


def _raw_template(J, p, n):
    if p > sum(J):
        return BiForm.zero()
    S = {a: _symbolic_gamma(a, n) for a in range(1, p + 1)}
    # homogeneous slots r_b = phi_{b+1} o .. o phi_p, and the cocycle identity
    # Gamma(psi o chi) = chi^*Gamma(psi) + Gamma(chi) makes Gamma(r_b) = sum_{c > b} S_c
    pulled = [_matsum([S[c] for c in range(b + 1, p + 1)], n) for b in range(p + 1)]
    conn = SimplicialConnection(p, (), "base", None, pulled)
    curv = SimplicialCurvature(p, conn, closed_form_curvature(conn))
    out = fiber_integrate(p, chern_form(J, curv))
    return out if level_sign(p) == 1 else -out


def _slot_images(phis):
    """Symbol -> gamma^i_{jk}(phi_a) at (chi_a(x), chi_a'(x)), chi_a = phi_{a+1}..phi_p."""
    p = len(phis)
    n = phis[0].n
    imgs = {}
    chi = identity(n)
    for a in range(p, 0, -1):
        pt = {f"x{i + 1}": LocalizedPoly(c) for i, c in enumerate(chi.components)}
        Jc = chi.jacobian()
        for i in range(n):
            for j in range(n):
                pt[f"y{i + 1}_{j + 1}"] = Jc[i][j]
        phi = phis[a - 1]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                for k in range(1, n + 1):
                    g = gamma_coeff(phi, i, (j, k), frame=True)
                    imgs[symbol(a, i, (j, k))] = g.substitute(pt) if not g.is_zero() else g
        chi = compose(phi, chi)
    return imgs


def template_value(tpl: JetTemplate, phis) -> BiForm:
    """Evaluate the template on concrete diffeomorphisms phi_1..phi_p."""
    phis = tuple(phis)
    if len(phis) != tpl.p:
        raise ValueError(f"template of degree {tpl.p} needs {tpl.p} diffeomorphisms")
    if tpl.p == 0:
        return tpl.form
    imgs = _slot_images(phis)
    return tpl.form.map_coeffs(lambda c: c.substitute(imgs))


def jet_template(J, p, n, validate=True, tuples=5, seed=0, degree=2) -> JetTemplate:
    """Template of C_J^{(p)} in inhomogeneous coordinates; with ``validate``
    it is compared exactly with the cocycle on random tuples."""
    J = _check_J(J, n)
    raw = _raw_template(J, p, n).simplify()
    tpl = JetTemplate(J, p, n, raw)
    assert_jet_order(tpl)
    if not validate:
        return tpl
    rng = random.Random(seed)
    cases = [tuple(random_diffeo(rng, n, degree) for _ in range(p)) for _ in range(tuples)]
    ref = hom_to_inhom(chern_group_cochain(J, p, n), n)

    def job(phis):
        diff = (template_value(tpl, phis) - ref(phis)).simplify()
        return None if diff.is_zero() else {"tuple": [repr(f) for f in phis],
                                            "difference": str(diff)}
    bad = [w for w in _pmap(job, cases) if w is not None]
    if bad:
        raise TemplateMismatch(f"template of C_{J}^({p}) disagrees with the cocycle: {bad[0]}")
    return JetTemplate(J, p, n, raw, True, len(cases))


def template_orders(tpl: JetTemplate):
    """Orders r of the gamma symbols (gamma^i_{jk l1..lr} has order r)."""
    return {len(parse_symbol(s)[2]) - 2 for s in tpl.symbols()}


def assert_jet_order(tpl: JetTemplate, max_order=1):
    bad = sorted(s for s in tpl.symbols() if len(parse_symbol(s)[2]) - 2 > max_order)
    if bad:
        raise JetOrderError(f"symbols of order > {max_order}: {bad[:5]}")
    for v in tpl.form.variables():
        if not parse_symbol(v):
            raise NotExtractable(f"coefficient depends on {v} outside the gamma symbols")
    return True


# ------------------------------------------------------------ extraction

def in_X_dot(w):
    """Word in F^delta_n + sum_k F^delta_n X_k."""
    F, U = w
    return all(g[0] == "D" for g in F) and (U == () or (len(U) == 1 and U[0][0] == "X"))


@dataclass
class ExtractedTensor:
    J: tuple
    n: int
    p: int
    tensor: TensorElement
    phi_prefactor: Q
    horizontal_legs: int
    checks: dict = field(default_factory=dict)

    @property
    def q(self):
        return self.tensor.q

    def to_json(self):
        return {"class": list(self.J), "n": self.n, "level": self.p, "q": self.q,
                "phi_prefactor": str(self.phi_prefactor),
                "horizontal_legs": self.horizontal_legs,
                "tensor": tensor_to_json(self.tensor),
                "checks": {k: self.checks[k] for k in sorted(self.checks)}}


def tensor_to_json(t: TensorElement):
    def leg(w):
        F, U = w
        gens = [{"delta": [g[1], list(g[2])]} for g in F]
        gens += [{"X": g[1]} if g[0] == "X" else {"Y": [g[1], g[2]]} for g in U]
        return gens
    terms = sorted(t.terms.items(), key=lambda kv: [fmt_word(w) for w in kv[0]])
    return {"q": t.q, "terms": [{"coefficient": str(c), "legs": [leg(w) for w in k],
                                 "text": " ⊗ ".join(fmt_word(w) for w in k)}
                                for k, c in terms]}


def _monomial_legs(mono, p):
    legs = [HopfElement.scalar(1) for _ in range(p)]
    for vid, e in mono:
        name = var_name(vid)
        a, i, lower = parse_symbol(name)
        for _ in range(e):
            legs[a - 1] = legs[a - 1] * HopfElement.gen(D(i, *lower))
    return legs


def _raw_tensor(tpl: JetTemplate):
    n, p = tpl.n, tpl.p
    out = None
    hdeg = None
    for gens, coef in tpl.form.terms.items():
        if coef.den:
            raise NotExtractable("template coefficient is not polynomial in the symbols")
        K = [g - 100 for g in gens]
        L = [k for k in range(1, n + 1) if k not in K]
        if hdeg is None:
            hdeg = len(L)
        elif hdeg != len(L):
            raise NotExtractable("template mixes form degrees")
        base_sign = perm_sign(sorted(range(n), key=lambda i: (K + L)[i]))
        for mono, c in coef.num.terms.items():
            legs = _monomial_legs(mono, p)
            for sigma in itertools.permutations(range(len(L))):
                s = base_sign * perm_sign(sigma)
                xlegs = [HopfElement.gen(X(L[i])) for i in sigma]
                t = TensorElement.from_legs(*(legs + xlegs)).scale(Q(c) * s)
                out = t if out is None else out + t
    if out is None:
        return TensorElement({}, p), 0
    return out, hdeg


def extract_hopf_tensor(tpl: JetTemplate, check=True, require_validated=True) -> ExtractedTensor:
    """Hopf tensor of a validated template, reduced to Q_n, with the
    structural checks (legs in X_n, twisted gl_n-invariance, relative
    (b, B)-cocycle) recorded and enforced when ``check`` is set."""
    if require_validated and not tpl.validated and not tpl.is_zero():
        raise UnsupportedInput("template must be validated before extraction")
    assert_jet_order(tpl)
    set_dimension(tpl.n)
    raw, hdeg = _raw_tensor(tpl)
    t = reduce_tensor(raw)
    form_deg = tpl.n - hdeg
    m = t.q
    prefactor = Q(_fact(form_deg), _fact(m + 1))
    ext = ExtractedTensor(tpl.J, tpl.n, tpl.p, t, prefactor, hdeg)
    if check:
        _run_checks(ext)
    return ext


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _run_checks(ext: ExtractedTensor):
    t, n = ext.tensor, ext.n
    ch = ext.checks
    ch["legs_in_X_dot"] = all(in_X_dot(w) for k in t.terms for w in k)
    if not ch["legs_in_X_dot"]:
        raise AssertionError("extracted legs leave F^delta_n + F^delta_n X")
    if t.is_zero():
        ch.update(gl_invariant=True, b_closed="zero", B_closed="zero")
        return ext
    ch["gl_invariant"] = gl_invariance_check(t, n)
    if not ch["gl_invariant"]:
        raise AssertionError("extracted tensor is not twisted gl_n-invariant")
    for name, op in (("b_closed", b_op), ("B_closed", B_op)):
        img = op(t, RELATIVE)
        if img.is_zero():
            ch[name] = "zero"
        elif in_twisted_image(img, n):
            ch[name] = "zero modulo the gl_n image"
        else:
            raise AssertionError(f"extracted tensor is not {name.split('_')[0]}-closed")
    return ext


def extract_class(J, n, validate=True, tuples=5, seed=0, check=True):
    """All nonzero levels of C_J, extracted; returns a list of ExtractedTensor."""
    J = _check_J(J, n)
    out = []
    for p in range(0, sum(J) + 1):
        raw = _raw_template(J, p, n).simplify()
        if raw.is_zero():
            continue
        tpl = jet_template(J, p, n, validate=validate, tuples=tuples, seed=seed)
        out.append(extract_hopf_tensor(tpl, check=check, require_validated=validate))
    return out


# ------------------------------------------------------------ Phi cross-check

@dataclass
class PhiReport:
    ok: bool
    constant: Q | None
    samples: list
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "constant": None if self.constant is None else str(self.constant),
                "samples": self.samples, "witnesses": self.witnesses}


def _char_integrand(t: TensorElement, f0, f1, phi):
    """tau_base(U_phi f0 . h(f1 U*_phi)) as an integrand in the pulled-back
    coordinate u = phi^{-1}(x): (f0 F)(u, phi'(u)^{-1}) det phi'(u)."""
    n = phi.n
    total = LocalizedPoly.const(0)
    for k, c in t.terms.items():
        h = HopfElement.word(k[0])
        F = act(h, CrossedMonomial(f1, phi)).f
        total = total + F * (f0 * c)
    jac = phi.jacobian()[0][0]
    val = total.substitute({"y1_1": jac.inv()}) * jac
    return BiForm.dx(1) * val.simplify()


def _phi_integrand(lam: GroupCochain, f0, f1, phi):
    """Phi(lam)(a0, a1) for a0 = U_phi f0, a1 = f1 U*_phi, m = 1.

    j = 0: lam~(da1 a0), da1 = (df1 - f1 gamma_phi) U*_phi;
    j = 1: lam~(a0 da1) = lam~(U_phi b U*_phi), read in the pulled-back
    coordinate; by covariance the slot 1 becomes phi and gamma_phi becomes
    the difference gamma_phi - gamma_e of the shifted slots."""
    n = phi.n
    e = identity(n)
    w = -(f0 * f1)
    j0 = lam((e, phi)) * w
    j1 = (lam((phi, phi)) - lam((phi, e))) * w
    return ((j0 + j1) * Q(1, 2)).simplify()


def _default_samples(rng, count):
    xs = LocalizedPoly.var("x1")
    out = []
    for _ in range(count):
        f0 = LocalizedPoly.const(Q(rng.randint(1, 5))) + xs * Q(rng.randint(-3, 3))
        f1 = LocalizedPoly.const(Q(rng.randint(-3, 3))) + xs * xs * Q(rng.randint(1, 3))
        phi = random_diffeo(rng, 1, 2)
        out.append((f0, f1, phi))
    return out


def phi_integrand_check(t: TensorElement, cochain: GroupCochain, samples=5, seed=0):
    """Compare Phi(cochain)(a0, a1) with chi_base(t)(a0, a1) integrand by
    integrand over sample pairs (U_phi f0, f1 U*_phi); both sides must agree
    up to one constant, the same for every sample."""
    if isinstance(samples, int):
        samples = _default_samples(random.Random(seed), samples)
    if cochain.n not in (None, 1) or any(phi.n != 1 for _, _, phi in samples):
        raise UnsupportedInput("the Phi cross-check is implemented for n = 1")
    set_dimension(1)
    if not t.is_zero() and t.q != 1:
        raise UnsupportedInput("the Phi cross-check is implemented for 1-tensors")
    if cochain.inhomogeneous or cochain.p != 1:
        raise UnsupportedInput("expected the homogeneous level-1 component")
    const = None
    entries, witnesses = [], []
    for idx, (f0, f1, phi) in enumerate(samples):
        lhs = _phi_integrand(cochain, f0, f1, phi)
        rhs = _char_integrand(t, f0, f1, phi) if not t.is_zero() else BiForm.zero()
        entry = {"sample": idx, "phi": repr(phi), "f0": str(f0), "f1": str(f1),
                 "phi_side": str(lhs), "char_side": str(rhs)}
        entries.append(entry)
        if rhs.is_zero():
            if not lhs.is_zero():
                witnesses.append(dict(entry, reason="characteristic side vanishes alone"))
            continue
        if const is None:
            const = _ratio(lhs, rhs)
            if const is None:
                witnesses.append(dict(entry, reason="sides are not proportional"))
                continue
        if not (lhs - rhs * const).simplify().is_zero():
            witnesses.append(dict(entry, reason=f"constant {const} fails"))
    return PhiReport(not witnesses, const, entries, witnesses)


def _ratio(lhs: BiForm, rhs: BiForm):
    gens = next(iter(rhs.terms))
    a = lhs.coefficient(gens).simplify()
    b = rhs.coefficient(gens).simplify()
    for x in range(2, 40):
        try:
            bv = b.evaluate({"x1": Q(x, 3)})
            if bv:
                c = a.evaluate({"x1": Q(x, 3)}) / bv
                return c if (lhs - rhs * c).simplify().is_zero() else None
        except ZeroDivisionError:
            continue
    return None
