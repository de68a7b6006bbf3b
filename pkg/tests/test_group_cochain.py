import random

import pytest

from hopf_chern.exact import LocalizedPoly, var
from hopf_chern.forms import BiForm
from hopf_chern.group_cochain import (GroupCochain, UnsupportedInput, chern_components,
                                      chern_group_cochain, covariance_check, delta_bar,
                                      hom_to_inhom, inhom_to_hom, total_closedness)
from hopf_chern.jets import compose, gamma_form, identity, make_poly_diffeo, random_diffeo

x = var("x1")
phi = make_poly_diffeo(["x1 + x1^2"])
ident = identity(1)


def same(a, b):
    return (a - b).simplify().is_zero()


def trace_gamma(tup):
    G = gamma_form(tup[0])
    out = BiForm.zero()
    for i in range(len(G)):
        out = out + G[i][i]
    return out


def test_constant_cochain_is_closed():
    c = GroupCochain(0, lambda tup: BiForm.scalar(3))
    assert delta_bar(c)((ident, phi)).is_zero()


def test_delta_bar_of_trace_gamma():
    c = GroupCochain(0, trace_gamma)
    assert same(delta_bar(c)((ident, phi)), trace_gamma((phi,)))


@pytest.mark.parametrize("n", [1, 2])
def test_delta_bar_squared(n, rng):
    c0 = GroupCochain(0, trace_gamma, n=n)
    c1 = chern_group_cochain((1,), 1, n)
    for c in (c0, c1):
        tup = tuple(random_diffeo(rng, n, 2) for _ in range(c.p + 3))
        assert delta_bar(delta_bar(c))(tup).simplify().is_zero()


def test_covariance_examples():
    c = chern_group_cochain((1,), 1, 1)
    assert covariance_check(c, ident, (ident, phi))
    assert covariance_check(c, make_poly_diffeo(["2*x1"]), (ident, phi))


def test_covariance_negative_control():
    good = chern_group_cochain((1,), 1, 1)
    # drop the phi_0 term of C_1^(1): only -tr Gamma(phi_1) survives
    bad = GroupCochain(1, lambda tup: -trace_gamma(tup[1:]), "corrupted", 1)
    rho = make_poly_diffeo(["x1 + x1^2 / 3"])
    tup = (make_poly_diffeo(["x1 - x1^2"]), phi)
    assert covariance_check(good, rho, tup)
    res = covariance_check(bad, rho, tup)
    assert not res and "difference" in res.witness


def _covariance_sample(rng, n, p):
    from hopf_chern.jets import SingularLinearPart
    while True:
        rho = random_diffeo(rng, n, 2)
        tup = tuple(random_diffeo(rng, n, 2) for _ in range(p + 1))
        try:
            for r in tup:
                compose(r, rho)
        except SingularLinearPart:
            continue
        return rho, tup


@pytest.mark.parametrize("n,J", [(1, (1,)), (2, (1,)), (2, (2,)), (2, (1, 1))])
def test_every_component_is_covariant(n, J, rng):
    for c in chern_components(J, n):
        for _ in range(5 if n == 1 else 2):
            rho, tup = _covariance_sample(rng, n, c.p)
            assert covariance_check(c, rho, tup)


def test_regular_differentiable_shape(rng):
    tup = (random_diffeo(rng, 2, 2), random_diffeo(rng, 2, 2))
    val = chern_group_cochain((1,), 1, 2)(tup)
    allowed = {f.det_id for f in tup}
    assert all(rid in allowed for c in val.terms.values() for rid, _ in c.den)


def test_symbolic_closedness_n1():
    rep = total_closedness((1,), 1, mode="symbolic")
    assert rep.ok and all(e["status"] == "pass" for e in rep.entries)


def test_closedness_negative_control():
    comps = chern_components((1,), 1)
    # flip the sign of the phi_0 term only; a global sign flip stays closed for n = 1
    flipped = GroupCochain(1, lambda tup: -trace_gamma(tup[1:]) - trace_gamma(tup), "flipped", 1)
    rep = total_closedness((1,), 1, mode="symbolic", components=[comps[0], flipped, comps[2]])
    assert not rep.ok
    assert any(e["status"] == "fail" and e["witness"] for e in rep.entries)


def test_p0_component_vanishes():
    c0 = chern_group_cochain((1,), 0, 1)
    assert delta_bar(c0)((ident, phi)).simplify().is_zero()


def test_randomized_closedness_report_is_deterministic():
    a = total_closedness((1,), 2, mode="randomized", points=3, seed=5).to_json()
    b = total_closedness((1,), 2, mode="randomized", points=3, seed=5).to_json()
    assert a == b and a["ok"]


def test_inhomogeneous_conversion():
    c = chern_group_cochain((1,), 1, 1)
    ci = hom_to_inhom(c)
    assert same(ci(phi), c((phi, ident)))
    c0 = hom_to_inhom(chern_group_cochain((1,), 0, 1))
    assert same(c0(), chern_group_cochain((1,), 0, 1)((ident,)))
    with pytest.raises(UnsupportedInput):
        inhom_to_hom(ci)


def test_hom_inhom_round_trip(rng):
    c = chern_group_cochain((1,), 1, 1)
    q, last = random_diffeo(rng, 1, 2), random_diffeo(rng, 1, 2)
    val, tup = inhom_to_hom(hom_to_inhom(c), quotients=(q,), last=last)
    assert tup == (compose(q, last), last)
    assert same(val, c(tup))
