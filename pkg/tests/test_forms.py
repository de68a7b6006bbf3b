import random

import pytest
from hypothesis import given, settings, strategies as st

from hopf_chern.chern_weil import simplicial_connection, simplicial_curvature
from hopf_chern.exact import LocalizedPoly, Q, var
from hopf_chern.forms import (BiForm, d, degeneracy_map, face_map, fiber_integrate, pullback,
                              substitute, wedge)
from hopf_chern.jets import identity, make_poly_diffeo, random_diffeo

from conftest import polys

x = var("x1")
dx, dt1, dt2 = BiForm.dx(1), BiForm.dt(1), BiForm.dt(2)


def same(a, b):
    return (a - b).simplify().is_zero()


def test_wedge_signs():
    assert wedge(dx, dx).is_zero()
    assert same(wedge(dt1, dx), -wedge(dx, dt1))
    t1 = var("t1")
    assert same(wedge(dx * x, dt1 * t1), -(wedge(dt1, dx) * (x * t1)))


def test_exterior_derivative_examples():
    assert same(d(BiForm.scalar(x)), dx)
    assert same(d(dx * var("t1")), wedge(dt1, dx))


def test_pullback_examples():
    assert same(pullback(dx, make_poly_diffeo(["2*x1"])), dx * 2)
    phi = make_poly_diffeo(["x1 + x1^2"])
    assert same(pullback(dx * x, phi), dx * ((x + x * x) * (1 + 2 * x)))
    assert same(pullback(dx * x, identity(1)), dx * x)


def test_fiber_integral_examples():
    t1 = var("t1")
    assert same(fiber_integrate(1, wedge(dt1, dx) * t1), dx * Q(1, 2))
    assert same(fiber_integrate(2, wedge(dt1, dt2) * t1), BiForm.scalar(Q(1, 6)))
    assert fiber_integrate(1, dx * x).is_zero()


_GENS = [BiForm.dt(1), BiForm.dt(2), BiForm.dx(1), BiForm.dx(2), BiForm.dy(1, 1)]


@st.composite
def biforms(draw):
    out = BiForm.zero()
    for _ in range(draw(st.integers(1, 3))):
        term = BiForm.scalar(LocalizedPoly(draw(polys(names=("x1", "x2", "t1", "t2", "y1_1")))))
        for g in draw(st.lists(st.sampled_from(_GENS), max_size=2, unique_by=id)):
            term = wedge(term, g)
        out = out + term
    return out


@settings(max_examples=50)
@given(biforms())
def test_d_squared_is_zero(a):
    assert d(d(a)).simplify().is_zero()


@given(biforms(), biforms(), st.integers(-3, 3))
def test_fiber_integration_is_linear(a, b, c):
    for p in (1, 2):
        assert same(fiber_integrate(p, a + b * c), fiber_integrate(p, a) + fiber_integrate(p, b) * c)


def test_fiber_integration_kills_wrong_dt_degree():
    t1 = var("t1")
    assert fiber_integrate(2, wedge(dt1, dx) * t1).is_zero()
    assert fiber_integrate(1, wedge(wedge(dt1, dt2), dx)).is_zero()


def _boundary(p, w):
    tot = BiForm.zero()
    for i in range(p + 1):
        f = fiber_integrate(p - 1, substitute(w, face_map(i, p)))
        tot = tot + (f if i % 2 == 0 else -f)
    return tot


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("p", [1, 2])
def test_stokes_on_connection_and_curvature(n, p):
    rng = random.Random(10 * n + p)
    tup = [random_diffeo(rng, n, 2) for _ in range(p + 1)]
    conn = simplicial_connection(tup)
    R = simplicial_curvature(conn).R
    for fam in (conn.omega, R):
        for i in range(n):
            for j in range(n):
                w = fam[i][j]
                inner = d(fiber_integrate(p, w))
                lhs = fiber_integrate(p, d(w)) - (inner if p % 2 == 0 else -inner)
                assert same(lhs, _boundary(p, w))


@pytest.mark.parametrize("p", [1, 2])
def test_simplicial_compatibility(p):
    rng = random.Random(p)
    n = 2
    tup = [random_diffeo(rng, n, 2) for _ in range(p + 1)]
    conn = simplicial_connection(tup)
    R = simplicial_curvature(conn).R
    for i in range(p + 1):
        sub = tup[:i] + tup[i + 1:]
        c2 = simplicial_connection(sub)
        R2 = simplicial_curvature(c2).R
        for a in range(n):
            for b in range(n):
                assert same(substitute(conn.omega[a][b], face_map(i, p)), c2.omega[a][b])
                assert same(substitute(R[a][b], face_map(i, p)), R2[a][b])
    for i in range(p + 1):
        up = tup[:i + 1] + tup[i:]
        c3 = simplicial_connection(up)
        R3 = simplicial_curvature(c3).R
        for a in range(n):
            for b in range(n):
                assert same(substitute(conn.omega[a][b], degeneracy_map(i, p)), c3.omega[a][b])
                assert same(substitute(R[a][b], degeneracy_map(i, p)), R3[a][b])
