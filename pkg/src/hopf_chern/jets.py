"""Polynomial diffeomorphisms of R^n and the jet quantities they feed.

Coordinates are ``x1..xn``; frame coordinates are ``y{i}_{j}`` (row i,
column j).  Horizontal and vertical fields follow the left-invariant
convention on R^n x| GL_n:

    X_k    = sum_mu y{mu}_{k} d/dx{mu}
    Y(a,b) = sum_mu y{mu}_{a} d/dy{mu}_{b}
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from functools import lru_cache

from .exact import LocalizedPoly, Poly, Q, register, var

__all__ = [
    "JetDiffeo", "make_poly_diffeo", "identity", "generic_diffeo", "jacobian",
    "det", "adjugate", "inverse_matrix", "compose", "gamma_form", "gamma_matrix",
    "gamma_coeff", "prolong", "xs", "ys", "frame_matrix", "X_field", "Y_field",
    "random_diffeo", "diffeo_from_json", "diffeo_to_json", "SingularLinearPart",
]


class SingularLinearPart(ValueError):
    pass


def xs(n):
    return [f"x{i}" for i in range(1, n + 1)]


def ys(n):
    return [[f"y{i}_{j}" for j in range(1, n + 1)] for i in range(1, n + 1)]


def frame_matrix(n):
    return [[var(name) for name in row] for row in ys(n)]


# ----------------------------------------------------------- matrix helpers

def det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = LocalizedPoly.const(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(M):
    n = len(M)
    if n == 1:
        return [[LocalizedPoly.const(1)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(M) if k != j]
            c = det(minor)
            adj[i][j] = c if (i + j) % 2 == 0 else -c
    return adj


def inverse_matrix(M):
    d = det(M)
    dinv = d.inv()
    return [[a * dinv for a in row] for row in adjugate(M)]


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            s = LocalizedPoly.const(0)
            for k in range(m):
                if not A[i][k].is_zero() and not B[k][j].is_zero():
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


# ---------------------------------------------------------------- JetDiffeo

class JetDiffeo:
    """x -> (phi^1(x), ..., phi^n(x)) with polynomial components.

    Components are ``Poly`` in ``x1..xn`` whose coefficients may themselves
    involve constant symbols (generic jets).  The Jacobian determinant is
    registered as a localization denominator on construction.
    """

    def __init__(self, components, check=True):
        self.components = tuple(components)
        self.n = len(self.components)
        self._jac = None
        self._det = None
        self._key = tuple(c.key() for c in self.components)
        self._hash = hash(self._key)
        if check:
            lin = self.linear_part()
            dv = det([[LocalizedPoly(p) for p in row] for row in lin]).num
            if dv.is_zero():
                raise SingularLinearPart("linear part of the diffeomorphism is singular")
        self.det_id = register(self.det_poly()) if not self.det_poly().is_const() else None

    def __eq__(self, other):
        return isinstance(other, JetDiffeo) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "JetDiffeo(" + ", ".join(str(c) for c in self.components) + ")"

    def linear_part(self):
        """Matrix of coefficients of x_j in phi^i (as Polys in the jet symbols)."""
        names = xs(self.n)
        zero = {nm: Poly.const(0) for nm in names}
        rows = []
        for c in self.components:
            row = []
            for nm in names:
                row.append(c.diff(nm).substitute(zero))
            rows.append(row)
        return rows

    def jacobian(self):
        if self._jac is None:
            names = xs(self.n)
            self._jac = [[LocalizedPoly(c.diff(nm)) for nm in names] for c in self.components]
        return self._jac

    def det_poly(self):
        if self._det is None:
            self._det = det(self.jacobian()).num
        return self._det

    def is_identity(self):
        return all(c == Poly.var(f"x{i + 1}") for i, c in enumerate(self.components))

    def degree(self):
        return max(c.degree() for c in self.components)

    def __call__(self, point):
        return [c.evaluate(point) for c in self.components]


def make_poly_diffeo(coeffs, n=None):
    """Build from ``{(i, monomial exponents): coeff}`` (i is 1-based),
    or from a list of component Polys / infix strings."""
    if isinstance(coeffs, dict):
        if n is None:
            n = max(i for i, _ in coeffs)
        comps = [Poly.const(0) for _ in range(n)]
        names = xs(n)
        for (i, mono), c in coeffs.items():
            t = Poly.const(Q(Fraction(c)) if isinstance(c, str) else c)
            for nm, e in zip(names, mono):
                if e:
                    t = t * Poly.var(nm, e)
            comps[i - 1] = comps[i - 1] + t
        return JetDiffeo(comps)
    from .exact import parse
    comps = []
    for c in coeffs:
        if isinstance(c, str):
            c = parse(c)
        if isinstance(c, LocalizedPoly):
            if not c.is_poly():
                raise ValueError("diffeomorphism components must be polynomial")
            c = c.num
        comps.append(c)
    return JetDiffeo(comps)


def identity(n):
    return JetDiffeo([Poly.var(f"x{i}") for i in range(1, n + 1)])


def _multi_indices(n, order):
    """Sorted index tuples (derivative multi-indices) of a given order."""
    return list(itertools.combinations_with_replacement(range(1, n + 1), order))


def generic_diffeo(a, n, order):
    """Taylor polynomial at 0 with symbolic jet coefficients J(a;i;mu):
    phi^i(x) = sum_mu J(a;i;mu) x^mu / mu!  (mu as a sorted index list)."""
    comps = []
    names = xs(n)
    for i in range(1, n + 1):
        c = Poly.const(0)
        for k in range(order + 1):
            for mu in _multi_indices(n, k):
                sym = Poly.var(f"J({a};{i};{''.join(map(str, mu))})")
                mono = Poly.const(1)
                fact = 1
                for j in range(1, n + 1):
                    e = mu.count(j)
                    if e:
                        mono = mono * Poly.var(names[j - 1], e)
                        for f in range(2, e + 1):
                            fact *= f
                c = c + sym * mono * Q(1, fact)
        comps.append(c)
    return JetDiffeo(comps)


def random_diffeo(rng, n, degree=2, bound=3):
    """Random polynomial diffeo with linear part near the identity and small
    rational coefficients.  ``rng`` is a ``random.Random``."""
    names = xs(n)
    while True:
        comps = []
        for i in range(n):
            c = Poly.const(Q(rng.randint(-bound, bound), rng.randint(1, bound)))
            for k in range(1, degree + 1):
                for mono in itertools.combinations_with_replacement(range(n), k):
                    if k == 1:
                        coef = Q(1 if mono[0] == i else 0) + Q(rng.randint(-bound, bound), 2 * bound)
                    else:
                        coef = Q(rng.randint(-bound, bound), rng.randint(1, bound))
                    if coef:
                        t = Poly.const(coef)
                        for j in mono:
                            t = t * Poly.var(names[j])
                        c = c + t
            comps.append(c)
        try:
            phi = JetDiffeo(comps)
        except SingularLinearPart:
            continue
        if degree >= 2 and phi.det_poly().is_const():
            continue
        return phi


def jacobian(phi: JetDiffeo):
    return phi.jacobian()


def compose(phi: JetDiffeo, psi: JetDiffeo) -> JetDiffeo:
    """phi o psi."""
    images = {f"x{i + 1}": c for i, c in enumerate(psi.components)}
    return JetDiffeo([c.substitute(images) for c in phi.components])


def prolong(phi: JetDiffeo):
    """(x, y) -> (phi(x), phi'(x) y) as substitution images."""
    n = phi.n
    out = {f"x{i + 1}": LocalizedPoly(c) for i, c in enumerate(phi.components)}
    Y = frame_matrix(n)
    PY = matmul(phi.jacobian(), Y)
    for i in range(n):
        for j in range(n):
            out[f"y{i + 1}_{j + 1}"] = PY[i][j]
    return out


@lru_cache(maxsize=4096)
def _jac_inv(phi):
    return inverse_matrix(phi.jacobian())


@lru_cache(maxsize=4096)
def _gamma_mu(phi, mu):
    """(phi')^{-1} d_mu phi' as a matrix of LocalizedPoly (mu 1-based)."""
    dJ = [[e.diff(f"x{mu}") for e in row] for row in phi.jacobian()]
    return matmul(_jac_inv(phi), dJ)


def gamma_matrix(phi, mu):
    return _gamma_mu(phi, mu)


def gamma_form(phi: JetDiffeo):
    """Gamma(phi) = (phi')^{-1} d phi' as an n x n matrix of 1-forms."""
    from .forms import BiForm
    n = phi.n
    out = [[BiForm.zero() for _ in range(n)] for _ in range(n)]
    for mu in range(1, n + 1):
        G = _gamma_mu(phi, mu)
        for i in range(n):
            for j in range(n):
                if not G[i][j].is_zero():
                    out[i][j] = out[i][j] + BiForm.dx(mu) * G[i][j]
    return out


def X_field(f: LocalizedPoly, k: int, n: int):
    out = LocalizedPoly.const(0)
    for mu in range(1, n + 1):
        d = f.diff(f"x{mu}")
        if not d.is_zero():
            out = out + var(f"y{mu}_{k}") * d
    return out


def Y_field(f: LocalizedPoly, a: int, b: int, n: int):
    out = LocalizedPoly.const(0)
    for mu in range(1, n + 1):
        d = f.diff(f"y{mu}_{b}")
        if not d.is_zero():
            out = out + var(f"y{mu}_{a}") * d
    return out


@lru_cache(maxsize=None)
def _frame_inverse(n):
    return inverse_matrix(frame_matrix(n))


@lru_cache(maxsize=65536)
def _gamma_frame(phi, i, lower):
    n = phi.n
    j, k = lower[0], lower[1]
    if len(lower) == 2:
        Y = frame_matrix(n)
        Yi = _frame_inverse(n)
        total = LocalizedPoly.const(0)
        for mu in range(1, n + 1):
            G = _gamma_mu(phi, mu)
            # (y^{-1} G y)^i_j
            s = LocalizedPoly.const(0)
            for a in range(n):
                if Yi[i - 1][a].is_zero():
                    continue
                for b in range(n):
                    if G[a][b].is_zero():
                        continue
                    s = s + Yi[i - 1][a] * G[a][b] * Y[b][j - 1]
            if not s.is_zero():
                total = total + s * Y[mu - 1][k - 1]
        return total.simplify()
    return X_field(_gamma_frame(phi, i, lower[:-1]), lower[-1], n)


def gamma_coeff(phi: JetDiffeo, i, lower, frame=True):
    """gamma^i_{j k l1 ... lr}(phi) with ``lower = (j, k, l1, ..., lr)``.

    Successors apply X_{l1} first, then X_{l2}, ... .  With ``frame=False``
    the result is restricted to the section y = 1."""
    g = _gamma_frame(phi, i, tuple(lower))
    if frame:
        return g
    n = phi.n
    ones = {f"y{a}_{b}": Poly.const(1 if a == b else 0)
            for a in range(1, n + 1) for b in range(1, n + 1)}
    return g.substitute(ones)


# --------------------------------------------------------------------- JSON

def diffeo_to_json(phi: JetDiffeo):
    names = xs(phi.n)
    from .exact import var_name, _fmt_q
    comps = []
    for c in phi.components:
        terms = []
        for m, coef in c.sorted_terms():
            exps = dict((var_name(v), e) for v, e in m)
            extra = set(exps) - set(names)
            if extra:
                raise ValueError("symbolic coefficients are not JSON-serializable")
            terms.append({"monomial": [exps.get(nm, 0) for nm in names], "coeff": _fmt_q(coef)})
        comps.append(terms)
    return {"n": phi.n, "components": comps}


def diffeo_from_json(obj):
    """Accepts ``{"n": n, "components": [[{"monomial": [...], "coeff": "p/q"}...], ...]}``.

    One list of terms per component.  A flat term list whose entries carry
    an explicit ``"component"`` index (1-based) is accepted as well."""
    n = obj["n"]
    comps = obj["components"]
    table = {}
    if comps and isinstance(comps[0], dict):
        for t in comps:
            key = (int(t["component"]), tuple(t["monomial"]))
            table[key] = Fraction(table.get(key, 0)) + Fraction(str(t["coeff"]))
    else:
        if len(comps) != n:
            raise ValueError("component count must equal n")
        for i, terms in enumerate(comps, start=1):
            for t in terms:
                key = (i, tuple(t["monomial"]))
                table[key] = Fraction(table.get(key, 0)) + Fraction(str(t["coeff"]))
    return make_poly_diffeo({k: Q(v.numerator, v.denominator) for k, v in table.items()}, n=n)


def load_tuple(path):
    with open(path) as fh:
        data = json.load(fh)
    items = data["tuple"] if isinstance(data, dict) and "tuple" in data else data
    return [diffeo_from_json(d) for d in items]
