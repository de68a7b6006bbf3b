import random

import pytest
from hypothesis import given, settings, strategies as st

from hopf_chern.cyclic import (ABSOLUTE, RELATIVE, B_op, b_op, codegeneracy, coface, congruent,
                               gl_invariance_check, in_twisted_image, invariant_basis,
                               random_lift, random_tensor, reduce_to_Q, scalar_tensor, tau,
                               tau_power, twisted_action)
from hopf_chern.hopf import (D, E_WORD, HopfElement, TensorElement, X, Y, bracket, one,
                             set_dimension)
from hopf_chern.suites import cyclic_absolute, cyclic_relative

G = HopfElement.gen
legs = TensorElement.from_legs


def test_reduction_examples():
    set_dimension(2)
    assert reduce_to_Q(G(Y(1, 2))).is_zero()
    assert reduce_to_Q(G(D(1, 1, 1))) == G(D(1, 1, 1))
    for k in (1, 2):
        # X Y lies in H U+, while Y X = X Y + [Y, X]
        assert reduce_to_Q(G(X(k)) * G(Y(1, 2))).is_zero()
        assert reduce_to_Q(G(Y(1, 2)) * G(X(k))) == reduce_to_Q(bracket(G(Y(1, 2)), G(X(k))))


def test_low_degree_fixtures():
    set_dimension(1)
    unit = legs(one())
    assert tau(unit) == unit
    d = G(D(1, 1, 1))
    assert tau(legs(d)) == legs(-d)
    h = G(X(1))
    assert codegeneracy(0, legs(one(), h)) == legs(h)
    assert codegeneracy(0, legs(d, h)).is_zero()
    assert b_op(unit) == legs(one(), one())
    # B = sigma_0 tau_1 on C^1: tau(1) = 1, then the counit
    assert B_op(unit) == scalar_tensor(1)


def test_twisted_invariance_examples():
    set_dimension(1)
    assert gl_invariance_check(legs(G(D(1, 1, 1))), 1)
    assert not gl_invariance_check(legs(G(X(1))), 2)
    # coinvariants of the scalars vanish: (Y - delta(Y)) c = -c
    assert twisted_action(Y(1, 1), scalar_tensor(1)) == scalar_tensor(-1)
    assert not gl_invariance_check(scalar_tensor(1), 1)
    assert in_twisted_image(scalar_tensor(5), 1)


def test_invariant_basis_n1():
    basis = invariant_basis(1, (((2,), 0, 0),))
    assert len(basis) == 1 and set(basis[0].terms) == {(((D(1, 1, 1),), ()),)}


_seeds = st.integers(0, 10 ** 6)


@settings(max_examples=10)
@given(_seeds, st.sampled_from([1, 2]), st.sampled_from([1, 2]))
def test_cyclic_operator_has_period(seed, n, q):
    set_dimension(n)
    t = random_tensor(random.Random(seed), n, q)
    assert tau_power(t, q + 1) == t


@settings(max_examples=10)
@given(_seeds, st.sampled_from([1, 2]), st.sampled_from([0, 1, 2]))
def test_b_squared(seed, n, q):
    set_dimension(n)
    t = random_tensor(random.Random(seed), n, q)
    assert b_op(b_op(t)).is_zero()


@settings(max_examples=10)
@given(_seeds, st.sampled_from([1, 2]), st.sampled_from([1, 2, 3]))
def test_B_identities_on_normalized(seed, n, q):
    set_dimension(n)
    t = random_tensor(random.Random(seed), n, q, max_len=1, normalized=True)
    assert B_op(B_op(t)).is_zero()
    assert (b_op(B_op(t)) + B_op(b_op(t))).is_zero()


@settings(max_examples=10)
@given(_seeds, st.sampled_from([1, 2]))
def test_cocyclic_relations(seed, q):
    set_dimension(2)
    t = random_tensor(random.Random(seed), 2, q)
    assert tau(coface(0, t)) == coface(q + 1, t)
    for i in range(1, q + 2):
        assert tau(coface(i, t)) == coface(i - 1, tau(t))
    for i in range(1, q):
        assert tau(codegeneracy(i, t)) == codegeneracy(i - 1, tau(t))
    if q > 1:
        assert tau(codegeneracy(0, t)) == codegeneracy(q - 1, tau_power(t, 2))


@pytest.mark.parametrize("n", [1, 2])
def test_absolute_suite(n):
    rep = cyclic_absolute(n, (1, 2), count=10)
    assert rep["ok"], rep


@pytest.mark.parametrize("n,q", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_relative_lift_independence(n, q):
    rep = cyclic_relative(n, q, count=10)
    assert rep["ok"], rep


def test_lift_changes_nothing_in_Q():
    set_dimension(2)
    rng = random.Random(4)
    t = random_tensor(rng, 2, 2, relative=True, normalized=True)
    lift = random_lift(rng, 2, t)
    assert lift != t
    assert congruent(b_op(lift, RELATIVE), b_op(t, RELATIVE), 2)
