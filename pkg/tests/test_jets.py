import random

import pytest
from hypothesis import given, settings, strategies as st

from hopf_chern.exact import LocalizedPoly, Q, var
from hopf_chern.forms import BiForm, pullback
from hopf_chern.jets import (SingularLinearPart, compose, diffeo_from_json, diffeo_to_json,
                             gamma_coeff, gamma_form, generic_diffeo, identity, inverse_matrix,
                             make_poly_diffeo, matmul, prolong, random_diffeo, X_field)

x = var("x1")
phi = make_poly_diffeo(["x1 + x1^2"])


def form_eq(a, b):
    return (a - b).simplify().is_zero()


def test_construction():
    ident = identity(2)
    assert [[e.const_value() for e in row] for row in ident.linear_part()] == [[1, 0], [0, 1]]
    assert phi.det_poly() == (1 + 2 * x).num
    assert phi.det_id is not None
    with pytest.raises(SingularLinearPart):
        make_poly_diffeo(["x1^2"])


def test_jacobians():
    assert phi.jacobian() == [[1 + 2 * x]]
    psi = make_poly_diffeo(["x1 + x1*x2", "x2"])
    x2 = var("x2")
    assert psi.jacobian() == [[1 + x2, x], [LocalizedPoly.const(0), LocalizedPoly.const(1)]]


def test_composition():
    assert compose(phi, make_poly_diffeo(["2*x1"])) == make_poly_diffeo(["2*x1 + 4*x1^2"])
    assert compose(phi, identity(1)) == phi
    assert compose(identity(1), phi) == phi


def test_gamma_examples():
    assert all(e.is_zero() for row in gamma_form(identity(2)) for e in row)
    assert form_eq(gamma_form(phi)[0][0], BiForm.dx(1) * (2 * (1 + 2 * x).inv()))
    assert gamma_form(make_poly_diffeo(["2*x1"]))[0][0].is_zero()
    y = var("y1_1")
    assert (gamma_coeff(phi, 1, (1, 1)) - 2 * y * (1 + 2 * x).inv()).simplify().is_zero()
    assert gamma_coeff(identity(2), 1, (1, 2)).is_zero()


def test_first_successor_fixture():
    # oracle: X_1 = y d/dx applied to 2y/(1+2x), then y = 1
    g = gamma_coeff(phi, 1, (1, 1, 1), frame=False)
    assert (g + 4 * ((1 + 2 * x) ** 2).inv()).simplify().is_zero()
    manual = X_field(gamma_coeff(phi, 1, (1, 1)), 1, 1)
    assert (manual.substitute({"y1_1": 1}) - g).simplify().is_zero()


def test_prolongation():
    y = var("y1_1")
    assert prolong(identity(1)) == {"x1": x, "y1_1": y}
    p2 = prolong(make_poly_diffeo(["2*x1"]))
    assert p2["x1"] == 2 * x and p2["y1_1"] == 2 * y
    p = prolong(phi)
    assert p["x1"] == x + x * x and (p["y1_1"] - (1 + 2 * x) * y).is_zero()


def test_json_round_trip(rng):
    for n in (1, 2):
        f = random_diffeo(rng, n, 2)
        assert diffeo_from_json(diffeo_to_json(f)) == f


def _eval_matrix(M, pt):
    return [[e.evaluate(pt) for e in row] for row in M]


@settings(max_examples=20)
@given(st.integers(1, 2), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_chain_rule(n, degree, seed):
    r = random.Random(seed)
    f, g = random_diffeo(r, n, degree), random_diffeo(r, n, degree)
    pt = {f"x{i}": Q(r.randint(-5, 5), r.randint(1, 4)) for i in range(1, n + 1)}
    gpt = {f"x{i + 1}": v for i, v in enumerate(g(pt))}
    lhs = _eval_matrix(compose(f, g).jacobian(), pt)
    A, B = _eval_matrix(f.jacobian(), gpt), _eval_matrix(g.jacobian(), pt)
    rhs = [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert lhs == rhs


def _gamma_transform(f, g):
    n = f.n
    G = gamma_form(f)
    pulled = [[pullback(e, g) for e in row] for row in G]
    J, Ji = g.jacobian(), inverse_matrix(g.jacobian())
    Gg = gamma_form(g)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Gg[i][j]
            for a in range(n):
                for b in range(n):
                    if not pulled[a][b].is_zero():
                        acc = acc + pulled[a][b] * (Ji[i][a] * J[b][j])
            row.append(acc)
        out.append(row)
    return out


def test_gamma_cocycle_symbolic_n1():
    f, g = generic_diffeo(0, 1, 2), generic_diffeo(1, 1, 2)
    lhs, rhs = gamma_form(compose(f, g)), _gamma_transform(f, g)
    assert form_eq(lhs[0][0], rhs[0][0])


def test_gamma_cocycle_n2(rng):
    from hopf_chern.group_cochain import random_point
    for _ in range(3):
        f, g = random_diffeo(rng, 2, 2), random_diffeo(rng, 2, 2)
        lhs, rhs = gamma_form(compose(f, g)), _gamma_transform(f, g)
        pt = random_point(rng, ["x1", "x2"])
        for i in range(2):
            for j in range(2):
                assert not any((lhs[i][j] - rhs[i][j]).evaluate(pt).values())


@settings(max_examples=10)
@given(st.integers(0, 10 ** 6))
def test_trace_gamma_is_dlog_det(seed):
    f = random_diffeo(random.Random(seed), 1, 3)
    det = LocalizedPoly(f.det_poly())
    assert form_eq(gamma_form(f)[0][0], BiForm.dx(1) * (det.diff("x1") / det))
