import random

import pytest

from hopf_chern.chern_weil import chern_cocycle
from hopf_chern.cyclic import B_op, RELATIVE, b_op, congruent, gl_invariance_check
from hopf_chern.exact import LocalizedPoly, var
from hopf_chern.extract import (JetOrderError, JetTemplate, assert_jet_order, extract_class,
                                extract_hopf_tensor, in_X_dot, jet_template, parse_symbol,
                                phi_integrand_check, symbol, template_orders, template_value)
from hopf_chern.forms import BiForm
from hopf_chern.group_cochain import GroupCochain, UnsupportedInput, chern_group_cochain
from hopf_chern.hopf import D, HopfElement, TensorElement, X, set_dimension
from hopf_chern.jets import gamma_coeff, identity, make_poly_diffeo, random_diffeo
from hopf_chern.suites import extraction_n1, jet_order_bound

G = HopfElement.gen
phi = make_poly_diffeo(["x1 + x1^2"])


def same(a, b):
    return (a - b).simplify().is_zero()


def test_symbol_names_round_trip():
    assert parse_symbol(symbol(2, 1, (1, 2))) == (2, 1, (1, 2))


def test_n1_template():
    tpl = jet_template((1,), 1, 1)
    assert tpl.validated and set(tpl.symbols()) == {symbol(1, 1, (1, 1))}
    # the inhomogeneous C_1^(1)(phi) = C_1^(1)(phi, e) = +gamma(phi) dx at y = 1
    val = template_value(tpl, (phi,))
    assert same(val, BiForm.dx(1) * gamma_coeff(phi, 1, (1, 1), frame=False))
    assert same(val, chern_cocycle((1,), 1, (phi, identity(1))))


def test_identity_legs_give_zero():
    tpl = jet_template((1,), 2, 2)
    assert template_value(tpl, (identity(2), identity(2))).simplify().is_zero()


@pytest.mark.parametrize("J,p", [((1,), 1), ((1,), 2), ((2,), 2), ((1, 1), 2)])
def test_n2_templates_validate(J, p):
    tpl = jet_template(J, p, 2, tuples=5)
    assert tpl.validated and tpl.checked_tuples == 5
    assert_jet_order(tpl, 1)
    # only the undifferentiated gamma^i_{jk}, i.e. 2-jets, actually occur
    assert template_orders(tpl) <= {0}


def test_jet_order_guard():
    first = JetTemplate((1,), 1, 1, BiForm.dx(1) * var(symbol(1, 1, (1, 1, 1))), True, 0)
    assert template_orders(first) == {1} and assert_jet_order(first, 1)
    second = JetTemplate((1,), 1, 1, BiForm.dx(1) * var(symbol(1, 1, (1, 1, 1, 1))), True, 0)
    with pytest.raises(JetOrderError):
        assert_jet_order(second, 1)


def test_n1_extraction_is_the_delta_class():
    (ext,) = extract_class((1,), 1)
    assert ext.q == 1
    assert ext.tensor == TensorElement.from_legs(G(D(1, 1, 1)))
    assert ext.checks["gl_invariant"] and ext.checks["legs_in_X_dot"]
    assert b_op(ext.tensor, RELATIVE).is_zero() and B_op(ext.tensor, RELATIVE).is_zero()


def test_zero_template_gives_zero_tensor():
    tpl = JetTemplate((1,), 1, 1, BiForm.zero(), True, 0)
    assert extract_hopf_tensor(tpl).tensor.is_zero()


def test_n2_first_class_level_one():
    set_dimension(2)
    ext = next(e for e in extract_class((1,), 2) if e.p == 1)
    assert ext.q == 2 and ext.horizontal_legs == 1
    expected = (TensorElement.from_legs(G(D(1, 1, 1)), G(X(2)))
                - TensorElement.from_legs(G(D(1, 1, 2)), G(X(1)))
                + TensorElement.from_legs(G(D(2, 1, 2)), G(X(2)))
                - TensorElement.from_legs(G(D(2, 2, 2)), G(X(1))))
    assert ext.tensor == expected
    assert all(in_X_dot(w) for k in ext.tensor.terms for w in k)


@pytest.mark.parametrize("J", [(1,), (2,), (1, 1)])
def test_every_n2_extraction_is_an_invariant_cocycle(J):
    set_dimension(2)
    for ext in extract_class(J, 2):
        assert gl_invariance_check(ext.tensor, 2)
        for op in (b_op, B_op):
            img = op(ext.tensor, RELATIVE)
            assert img.is_zero() or congruent(img, TensorElement({}, img.q), 2)


def test_unvalidated_templates_are_refused():
    tpl = jet_template((1,), 1, 1, validate=False)
    with pytest.raises(UnsupportedInput):
        extract_hopf_tensor(tpl)


def test_phi_check_fixture():
    (ext,) = extract_class((1,), 1)
    rep = phi_integrand_check(ext.tensor, chern_group_cochain((1,), 1, 1), samples=5)
    assert rep.ok and rep.constant is not None and len(rep.samples) == 5
    # rescaling the tensor rescales the constant
    rep2 = phi_integrand_check(ext.tensor.scale(2), chern_group_cochain((1,), 1, 1))
    assert rep2.ok and rep2.constant * 2 == rep.constant


def test_phi_check_rejects_a_wrong_tensor():
    set_dimension(1)
    wrong = TensorElement.from_legs(G(X(1)))
    rep = phi_integrand_check(wrong, chern_group_cochain((1,), 1, 1))
    assert not rep.ok and rep.witnesses


def test_phi_check_identity_group_element():
    (ext,) = extract_class((1,), 1)
    x = var("x1")
    samples = [(1 + x, 2 + x * x, identity(1)), (3 * x, 1 + x, identity(1))]
    rep = phi_integrand_check(ext.tensor, chern_group_cochain((1,), 1, 1), samples=samples)
    assert rep.ok and all(s["phi_side"] == "0" and s["char_side"] == "0" for s in rep.samples)


def test_phi_check_trivial_case():
    zero = GroupCochain(1, lambda tup: BiForm.zero(), "zero", 1)
    assert phi_integrand_check(TensorElement({}, 1), zero).ok


def test_suite_entries():
    assert extraction_n1()["ok"]
    assert jet_order_bound()["ok"]
